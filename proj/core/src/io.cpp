#include "hochsplit/io.hpp"

#include <charconv>
#include <cmath>

#include "hochsplit/errors.hpp"

namespace hochsplit::io {

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw DomainError("complex number must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json to_json(const TruncatedSeries<Complex>& a) {
  json c = json::array();
  for (const auto& v : a.coeffs) c.push_back(complex_to_json(v));
  return {{"coeffs", c}, {"tail", a.tail}};
}

TruncatedSeries<Complex> series_from_json(const json& j) {
  std::vector<Complex> c;
  for (const auto& v : j.at("coeffs")) c.push_back(complex_from_json(v));
  return TruncatedSeries<Complex>::make(std::move(c), j.value("tail", 0.0));
}

json to_json(const Cochain<Complex>& t) {
  json vals = json::array();
  for (const auto& v : t.values()) vals.push_back(complex_to_json(v));
  return {{"degree", t.degree()},
          {"window", t.window()},
          {"shape", t.windows()},
          {"lambda", complex_to_json(t.point().lambda())},
          {"values", vals}};
}

Cochain<Complex> cochain_from_json(const json& j) {
  const auto degree = j.at("degree").get<std::size_t>();
  std::vector<std::size_t> shape;
  if (j.contains("shape")) shape = j.at("shape").get<std::vector<std::size_t>>();
  else shape.assign(degree, j.at("window").get<std::size_t>());
  if (shape.size() != degree) throw DomainError("cochain shape does not match its degree");
  Cochain<Complex> t(DiscPoint<Complex>(complex_from_json(j.at("lambda"))), shape);
  const auto& vals = j.at("values");
  if (vals.size() != t.size()) throw DomainError("cochain value count does not match its shape");
  auto out = t.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = complex_from_json(vals[i]);
  return t;
}

json to_json(const SplitReport& r) {
  return {{"lambda", complex_to_json(r.lambda)},
          {"degree", r.degree},
          {"window", r.window},
          {"blaschke_cutoff", r.blaschke_cutoff},
          {"residual_sup", r.residual_sup},
          {"certified_error", r.certified_error},
          {"operator_norm", r.operator_norm},
          {"division_sup", r.division_sup},
          {"bound_check", r.bound_check},
          {"exact", r.exact}};
}

SplitReport report_from_json(const json& j) {
  SplitReport r;
  r.lambda = complex_from_json(j.at("lambda"));
  r.degree = j.at("degree").get<std::size_t>();
  r.window = j.at("window").get<std::size_t>();
  r.blaschke_cutoff = j.at("blaschke_cutoff").get<std::size_t>();
  r.residual_sup = j.at("residual_sup").get<double>();
  r.certified_error = j.at("certified_error").get<double>();
  r.operator_norm = j.at("operator_norm").get<double>();
  r.division_sup = j.value("division_sup", 0.0);
  r.bound_check = j.at("bound_check").get<bool>();
  r.exact = j.value("exact", false);
  return r;
}

json to_json(const rat::RationalSeries& b) {
  json out = json::array();
  for (const auto& [x, v] : b.terms())
    out.push_back({{"num", x.get_num().get_str()}, {"den", x.get_den().get_str()}, {"re", v.real()}, {"im", v.imag()}});
  return out;
}

rat::RationalSeries rational_series_from_json(const json& j) {
  rat::RationalSeries out;
  for (const auto& e : j) {
    auto text = [](const json& v) { return v.is_string() ? v.get<std::string>() : std::to_string(v.get<long long>()); };
    rat::Rational q(mpz_class(text(e.at("num")), 10), mpz_class(text(e.at("den")), 10));
    if (q.get_den() == 0) throw DomainError("zero denominator");
    q.canonicalize();
    out.add(q, {e.value("re", 0.0), e.value("im", 0.0)});
  }
  return out;
}

json to_json(const halfline::GridFunction& f) {
  json vals = json::array();
  for (const auto& v : f.values) vals.push_back(complex_to_json(v));
  return {{"lo", f.lo}, {"hi", f.hi}, {"step", f.step}, {"values", vals}};
}

halfline::GridFunction grid_function_from_json(const json& j) {
  halfline::GridFunction f{j.at("lo").get<double>(), j.at("hi").get<double>(), j.at("step").get<double>(), {}};
  for (const auto& v : j.at("values")) f.values.push_back(complex_from_json(v));
  f.validate();
  return f;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void write_csv_header(std::ostream& os) {
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
}

void write_csv_row(std::ostream& os, const SplitReport& r) {
  os << format_double(r.lambda.real()) << ',' << format_double(r.lambda.imag()) << ',' << r.degree << ',' << r.window
     << ',' << r.blaschke_cutoff << ',' << format_double(r.residual_sup) << ',' << format_double(r.certified_error)
     << ',' << format_double(r.operator_norm) << ',' << (r.bound_check ? "true" : "false") << '\n';
}

}  // namespace hochsplit::io
