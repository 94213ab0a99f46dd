#pragma once

#include <stdexcept>
#include <string>

namespace syncdgc {

// File or parse problem in dataset / checkpoint IO. Messages carry
// "path:line:" context where a line number makes sense.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Optimization produced a non-finite loss; carries the offending epoch.
class TrainingError : public std::runtime_error {
 public:
  TrainingError(const std::string& what, int epoch)
      : std::runtime_error(what), epoch_(epoch) {}
  int epoch() const { return epoch_; }

 private:
  int epoch_;
};

}  // namespace syncdgc
