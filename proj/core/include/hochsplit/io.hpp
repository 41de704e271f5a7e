#pragma once

// JSON and CSV encodings of the library's value types.

#include <nlohmann/json.hpp>

#include <ostream>
#include <string>
#include <vector>

#include "hochsplit/cochain.hpp"
#include "hochsplit/discsplit.hpp"
#include "hochsplit/halfline.hpp"
#include "hochsplit/ratsemigroup.hpp"
#include "hochsplit/series.hpp"

namespace hochsplit::io {

using nlohmann::json;

json complex_to_json(Complex z);
Complex complex_from_json(const json& j);

/// {"coeffs": [[re, im], ...], "tail": t}
json to_json(const TruncatedSeries<Complex>& a);
TruncatedSeries<Complex> series_from_json(const json& j);

/// {"degree", "window", "shape", "lambda": [re, im], "values": row-major [[re, im], ...]}
json to_json(const Cochain<Complex>& t);
Cochain<Complex> cochain_from_json(const json& j);

json to_json(const SplitReport& r);
SplitReport report_from_json(const json& j);

/// [{"num", "den", "re", "im"}, ...]
json to_json(const rat::RationalSeries& b);
rat::RationalSeries rational_series_from_json(const json& j);

/// {"lo", "hi", "step", "values": [[re, im], ...]}
json to_json(const halfline::GridFunction& f);
halfline::GridFunction grid_function_from_json(const json& j);

/// Fixed column order of sweep CSV output.
inline const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols{"lambda_re", "lambda_im", "n", "N", "M_b",
                                             "residual", "certified", "opnorm", "pass"};
  return cols;
}
void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const SplitReport& r);

/// Shortest decimal form that reads back to the same double.
std::string format_double(double x);

}  // namespace hochsplit::io
