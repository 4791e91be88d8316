#pragma once

#include <stdexcept>
#include <string>

namespace heterocut {

/// Viewing directions of the two images coincide; no unique common line.
class DegeneratePair : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fewer than three images: rotations cannot be synchronized.
class TooFewImages : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The valid-pair graph is disconnected; synchronization is underdetermined.
class DisconnectedPairs : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative solver hit its iteration cap before reaching tolerance.
class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exhaustive enumeration would exceed the configured budget.
class InstanceTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace heterocut
