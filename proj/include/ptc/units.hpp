#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace ptc {

inline constexpr double kElementaryCharge = 1.602176634e-19;  // C

/// Base class for every error raised by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input violated a documented invariant. `field()` names the offender
/// using a dotted path (e.g. "wsc.insertion_loss").
class validation_error : public error {
 public:
  validation_error(std::string field, const std::string& what)
      : error(field + ": " + what), field_(std::move(field)), message_(what) {}

  const std::string& field() const noexcept { return field_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string field_;
  std::string message_;
};

namespace detail {

inline void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw validation_error(what, "value must be finite");
}

}  // namespace detail

inline double db_to_linear(double db) {
  detail::require_finite(db, "db");
  return std::pow(10.0, db / 10.0);
}

inline double linear_to_db(double ratio) {
  detail::require_finite(ratio, "ratio");
  if (ratio <= 0.0) throw validation_error("ratio", "must be positive");
  return 10.0 * std::log10(ratio);
}

inline double dbm_to_mw(double dbm) {
  detail::require_finite(dbm, "dbm");
  return std::pow(10.0, dbm / 10.0);
}

inline double mw_to_dbm(double mw) {
  detail::require_finite(mw, "mw");
  if (mw <= 0.0) throw validation_error("mw", "must be positive");
  return 10.0 * std::log10(mw);
}

}  // namespace ptc
