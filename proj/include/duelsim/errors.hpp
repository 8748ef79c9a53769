#pragma once

#include <stdexcept>
#include <string>

namespace duelsim {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RangeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AsymmetryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptyBallotsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidSizeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DisconnectedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TooLargeForExactError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DoubleCollectError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoCondorcetWinnerError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BadAlphaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace duelsim
