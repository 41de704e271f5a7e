#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hochsplit/errors.hpp"
#include "hochsplit/scalar.hpp"

namespace hochsplit::cli {

/// Unparseable or inconsistent configuration. key() names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what) : Error(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

enum class Mode { disc_split, norm_audit, stabilize, peak, rational, halfline, appendix };

std::string to_string(Mode m);
Mode mode_from_string(const std::string& s);

enum class Format { json, csv };

struct SweepConfig {
  Mode mode{Mode::disc_split};

  // Disc grid: radii x phases, or an explicit lambda list (which wins when nonempty).
  std::vector<std::string> radii{"0", "0.25", "0.5", "0.75", "0.9", "0.99"};
  std::size_t phases{8};
  std::vector<Complex> lambdas;

  std::size_t window{6};
  std::vector<std::size_t> degrees{1, 2};
  std::size_t cutoff{0};  ///< 0 selects the default policy
  std::size_t exact_cutoff{48};
  std::size_t seeds{2};
  std::uint64_t seed{20240601};
  double slack{1e-10};
  std::size_t trials{4};

  // Peak points.
  std::size_t m{1000};

  // Rational semigroup and appendix.
  std::string chain{"1,1/2,1/6,1/30"};
  double t{1.0};
  double s{0.7};

  // Half-line.
  std::vector<Complex> points{{0, 1}, {1, 1}, {0, 3}};
  double step{1.0 / 64};
  double length{0};  ///< 0 selects max(20, 14/Im lambda)
  std::size_t levels{3};

  std::string out;
  Format format{Format::json};
  std::size_t jobs{1};
  bool exact{false};

  bool operator==(const SweepConfig&) const = default;
};

/// Parses whitespace-separated "key=value" tokens ('#' starts a comment), then
/// applies the overrides in order. Values may not contain spaces. Unknown keys
/// raise ConfigError.
SweepConfig parse_config(const std::string& text, const std::vector<std::string>& overrides = {});

/// Applies one "key=value" assignment.
void apply_setting(SweepConfig& cfg, const std::string& key, const std::string& value);

/// key=value text that parses back to an equal config.
std::string to_text(const SweepConfig& cfg);

/// Parses "0.5", "-0.25i", "0.3+0.4i", "i", "1-i".
Complex parse_complex(const std::string& text);
std::string format_complex(Complex z);

}  // namespace hochsplit::cli
