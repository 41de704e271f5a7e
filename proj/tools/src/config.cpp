#include "hochsplit_cli/config.hpp"

#include <charconv>
#include <sstream>

#include "hochsplit/io.hpp"

namespace hochsplit::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  double x = 0;
  const auto* end = v.data() + v.size();
  auto res = std::from_chars(v.data(), end, x);
  if (res.ec != std::errc() || res.ptr != end) throw ConfigError(key, "expected a number, got '" + v + "'");
  return x;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t x = 0;
  const auto* end = v.data() + v.size();
  auto res = std::from_chars(v.data(), end, x);
  if (res.ec != std::errc() || res.ptr != end) throw ConfigError(key, "expected a nonnegative integer, got '" + v + "'");
  return x;
}

std::string join(const std::vector<std::string>& xs, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i];
  return out;
}

}  // namespace

std::string to_string(Mode m) {
  switch (m) {
    case Mode::disc_split: return "disc-split";
    case Mode::norm_audit: return "norm-audit";
    case Mode::stabilize: return "stabilize";
    case Mode::peak: return "peak";
    case Mode::rational: return "rational";
    case Mode::halfline: return "halfline";
    case Mode::appendix: return "appendix";
  }
  return "disc-split";
}

Mode mode_from_string(const std::string& s) {
  for (Mode m : {Mode::disc_split, Mode::norm_audit, Mode::stabilize, Mode::peak, Mode::rational, Mode::halfline,
                 Mode::appendix})
    if (to_string(m) == s) return m;
  throw ConfigError("mode", "unknown mode '" + s + "'");
}

Complex parse_complex(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (ch != ' ') s += ch;
  if (s.empty()) throw DomainError("empty complex literal");
  auto number = [&](const std::string& part) {
    double x = 0;
    const auto* end = part.data() + part.size();
    auto res = std::from_chars(part.data(), end, x);
    if (res.ec != std::errc() || res.ptr != end) throw DomainError("bad complex literal: " + text);
    return x;
  };
  if (s.back() != 'i') return {number(s), 0.0};
  s.pop_back();
  // Split at the last sign that is not an exponent sign or the leading sign.
  std::size_t cut = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      cut = k;
      break;
    }
  }
  std::string re = cut == std::string::npos ? "" : s.substr(0, cut);
  std::string im = cut == std::string::npos ? s : s.substr(cut);
  if (im.empty() || im == "+") im = "1";
  else if (im == "-") im = "-1";
  else if (im[0] == '+') im = im.substr(1);
  return {re.empty() ? 0.0 : number(re), number(im)};
}

std::string format_complex(Complex z) {
  std::string out = io::format_double(z.real());
  if (z.imag() != 0 || std::signbit(z.imag())) {
    const std::string im = io::format_double(z.imag());
    out += (im[0] == '-' ? "" : "+") + im + "i";
  }
  return out;
}

void apply_setting(SweepConfig& cfg, const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  auto complex_list = [&](const std::string& text) {
    std::vector<Complex> out;
    try {
      for (const auto& item : split(text, ';')) out.push_back(parse_complex(item));
    } catch (const DomainError& e) {
      throw ConfigError(key, e.what());
    }
    return out;
  };
  if (key == "mode") {
    cfg.mode = mode_from_string(v);
  } else if (key == "radii") {
    cfg.radii = split(v, ',');
    for (const auto& r : cfg.radii) {
      const double x = to_double(key, r);
      if (!(x >= 0 && x < 1)) throw ConfigError(key, "radii must lie in [0, 1)");
    }
  } else if (key == "phases") {
    cfg.phases = to_u64(key, v);
  } else if (key == "lambdas") {
    cfg.lambdas = complex_list(v);
  } else if (key == "window") {
    cfg.window = to_u64(key, v);
  } else if (key == "degrees") {
    cfg.degrees.clear();
    for (const auto& d : split(v, ',')) cfg.degrees.push_back(to_u64(key, d));
  } else if (key == "cutoff") {
    cfg.cutoff = v == "auto" ? 0 : to_u64(key, v);
  } else if (key == "exact_cutoff") {
    cfg.exact_cutoff = to_u64(key, v);
  } else if (key == "seeds") {
    cfg.seeds = to_u64(key, v);
  } else if (key == "seed") {
    cfg.seed = to_u64(key, v);
  } else if (key == "slack") {
    cfg.slack = to_double(key, v);
  } else if (key == "trials") {
    cfg.trials = to_u64(key, v);
  } else if (key == "m") {
    cfg.m = to_u64(key, v);
    if (cfg.m == 0) throw ConfigError(key, "m must be positive");
  } else if (key == "chain") {
    cfg.chain = v;
  } else if (key == "t") {
    cfg.t = to_double(key, v);
  } else if (key == "s") {
    cfg.s = to_double(key, v);
  } else if (key == "points") {
    cfg.points = complex_list(v);
  } else if (key == "step") {
    cfg.step = to_double(key, v);
    if (!(cfg.step > 0)) throw ConfigError(key, "step must be positive");
  } else if (key == "length") {
    cfg.length = to_double(key, v);
  } else if (key == "levels") {
    cfg.levels = to_u64(key, v);
  } else if (key == "out") {
    cfg.out = v;
  } else if (key == "format") {
    if (v == "json") cfg.format = Format::json;
    else if (v == "csv") cfg.format = Format::csv;
    else throw ConfigError(key, "expected json or csv");
  } else if (key == "jobs") {
    cfg.jobs = to_u64(key, v);
  } else if (key == "exact") {
    if (v == "true" || v == "1") cfg.exact = true;
    else if (v == "false" || v == "0") cfg.exact = false;
    else throw ConfigError(key, "expected true or false");
  } else {
    throw ConfigError(key, "unknown key");
  }
}

SweepConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
  SweepConfig cfg;
  auto assign = [&](const std::string& token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError(token, "expected key=value");
    apply_setting(cfg, token.substr(0, eq), token.substr(eq + 1));
  };
  std::stringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::stringstream tokens(line);
    std::string token;
    while (tokens >> token) assign(token);
  }
  for (const auto& o : overrides) assign(trim(o));
  return cfg;
}

std::string to_text(const SweepConfig& c) {
  std::vector<std::string> lam;
  for (auto z : c.lambdas) lam.push_back(format_complex(z));
  std::vector<std::string> pts;
  for (auto z : c.points) pts.push_back(format_complex(z));
  std::vector<std::string> deg;
  for (auto d : c.degrees) deg.push_back(std::to_string(d));
  std::ostringstream os;
  os << "mode=" << to_string(c.mode) << '\n'
     << "radii=" << join(c.radii, ",") << '\n'
     << "phases=" << c.phases << '\n'
     << "lambdas=" << join(lam, ";") << '\n'
     << "window=" << c.window << '\n'
     << "degrees=" << join(deg, ",") << '\n'
     << "cutoff=" << (c.cutoff == 0 ? std::string("auto") : std::to_string(c.cutoff)) << '\n'
     << "exact_cutoff=" << c.exact_cutoff << '\n'
     << "seeds=" << c.seeds << '\n'
     << "seed=" << c.seed << '\n'
     << "slack=" << io::format_double(c.slack) << '\n'
     << "trials=" << c.trials << '\n'
     << "m=" << c.m << '\n'
     << "chain=" << c.chain << '\n'
     << "t=" << io::format_double(c.t) << '\n'
     << "s=" << io::format_double(c.s) << '\n'
     << "points=" << join(pts, ";") << '\n'
     << "step=" << io::format_double(c.step) << '\n'
     << "length=" << io::format_double(c.length) << '\n'
     << "levels=" << c.levels << '\n'
     << "out=" << c.out << '\n'
     << "format=" << (c.format == Format::json ? "json" : "csv") << '\n'
     << "jobs=" << c.jobs << '\n'
     << "exact=" << (c.exact ? "true" : "false") << '\n';
  return os.str();
}

}  // namespace hochsplit::cli
