#include "hochsplit_cli/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numbers>
#include <thread>

#include "hochsplit/halfline.hpp"
#include "hochsplit/io.hpp"
#include "hochsplit/ratsemigroup.hpp"

namespace hochsplit::cli {

using nlohmann::json;

namespace {

using Task = std::function<std::vector<Record>()>;

// Unit complex numbers with rational coordinates, in increasing argument.
const std::vector<std::pair<std::string, std::string>>& exact_phases() {
  static const std::vector<std::pair<std::string, std::string>> ph{
      {"1", "0"}, {"3/5", "4/5"}, {"0", "1"}, {"-4/5", "3/5"}, {"-1", "0"}, {"-3/5", "-4/5"}, {"0", "-1"}, {"4/5", "-3/5"}};
  return ph;
}

std::vector<ExactComplex> exact_grid(const SweepConfig& cfg) {
  std::vector<ExactComplex> out;
  if (!cfg.lambdas.empty()) {
    for (Complex z : cfg.lambdas)
      out.emplace_back(parse_rational(io::format_double(z.real())), parse_rational(io::format_double(z.imag())));
    return out;
  }
  if (cfg.phases > exact_phases().size()) throw ConfigError("phases", "exact mode supports at most 8 phases");
  for (const auto& r : cfg.radii) {
    const mpq_class rq = parse_rational(r);
    for (std::size_t k = 0; k < cfg.phases; ++k) {
      const auto& [re, im] = exact_phases()[k];
      out.emplace_back(rq * parse_rational(re), rq * parse_rational(im));
    }
  }
  return out;
}

Record failure(const std::string& mode, Complex lambda, std::size_t degree, const std::string& what) {
  Record r;
  r.mode = mode;
  r.report.lambda = lambda;
  r.report.degree = degree;
  r.error = what;
  return r;
}

/// Wraps a case so that module errors become a failed record.
Task guarded(const std::string& mode, Complex lambda, std::size_t degree, Task body) {
  return [=]() -> std::vector<Record> {
    try {
      return body();
    } catch (const std::exception& e) {
      return {failure(mode, lambda, degree, e.what())};
    }
  };
}

Record make_record(const std::string& mode, const SplitReport& rep) {
  Record r;
  r.mode = mode;
  r.report = rep;
  return r;
}

std::size_t float_cutoff(const SweepConfig& cfg, double r) {
  return cfg.cutoff ? cfg.cutoff : default_blaschke_cutoff(r);
}

std::size_t exact_cutoff(const SweepConfig& cfg, const DiscPoint<ExactComplex>& p) {
  if (cfg.cutoff) return cfg.cutoff;
  return std::min(cfg.exact_cutoff, default_blaschke_cutoff(std::sqrt(p.modulus_squared().get_d())));
}

std::uint64_t case_seed(const SweepConfig& cfg, std::size_t k) { return cfg.seed + 7919 * static_cast<std::uint64_t>(k); }

template <class S>
std::vector<Task> disc_tasks(const SweepConfig& cfg, const std::vector<S>& grid) {
  std::vector<Task> tasks;
  const std::string mode = to_string(cfg.mode);
  for (const S& lam : grid) {
    const Complex lz = ScalarTraits<S>::to_complex(lam);
    for (std::size_t n : cfg.degrees) {
      auto cutoff_of = [&cfg](const DiscPoint<S>& p) {
        if constexpr (ScalarTraits<S>::exact) return exact_cutoff(cfg, p);
        else return float_cutoff(cfg, std::abs(p.lambda()));
      };
      switch (cfg.mode) {
        case Mode::disc_split:
          for (std::size_t k = 0; k < cfg.seeds; ++k)
            tasks.push_back(guarded(mode, lz, n, [=, &cfg]() -> std::vector<Record> {
              const DiscPoint<S> p(lam);
              Record r = make_record(mode, splitting_identity_check(n, p, cfg.window, cutoff_of(p), case_seed(cfg, k)));
              r.pass = r.report.bound_check;
              r.extra["seed"] = case_seed(cfg, k);
              return {r};
            }));
          break;
        case Mode::norm_audit:
          tasks.push_back(guarded(mode, lz, n, [=, &cfg]() -> std::vector<Record> {
            const DiscPoint<S> p(lam);
            Record r = make_record(mode, norm_audit(p, n, cfg.window, cutoff_of(p)));
            r.pass = r.report.bound_check;
            r.extra["division_sup"] = r.report.division_sup;
            return {r};
          }));
          break;
        case Mode::stabilize:
          for (std::size_t k = 0; k < cfg.trials; ++k)
            tasks.push_back(guarded(mode, lz, n, [=, &cfg]() -> std::vector<Record> {
              const DiscPoint<S> p(lam);
              const std::size_t m = cutoff_of(p);
              std::vector<std::size_t> box(n, 2 * cfg.window);
              box[0] = m + cfg.window;
              const auto t = random_cochain_box(p, box, case_seed(cfg, k));
              const auto st = stabilize(t, m);
              Record r;
              r.mode = mode;
              r.report.lambda = lz;
              r.report.degree = n;
              r.report.window = st.window;
              r.report.blaschke_cutoff = m;
              r.report.residual_sup = st.defect_after;
              r.report.certified_error = st.certified_error;
              r.report.operator_norm = st.coboundary_norm > 0 ? st.distance / st.coboundary_norm : 0.0;
              r.report.bound_check = st.bound_check;
              r.report.exact = ScalarTraits<S>::exact;
              r.pass = st.bound_check;
              r.extra["seed"] = case_seed(cfg, k);
              r.extra["distance"] = st.distance;
              r.extra["coboundary_norm"] = st.coboundary_norm;
              return {r};
            }));
          break;
        default:
          break;
      }
    }
  }
  return tasks;
}

std::vector<Task> peak_tasks(const SweepConfig& cfg) {
  if (cfg.exact) return {guarded("peak", 0.0, 0, []() -> std::vector<Record> { throw DomainError("peak mode runs in floating point only"); })};
  std::vector<Task> tasks;
  for (std::size_t k = 0; k < cfg.phases; ++k) {
    const double theta = 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(cfg.phases);
    for (std::size_t d : cfg.degrees)
      for (std::size_t s = 0; s < cfg.seeds; ++s)
        tasks.push_back(guarded("peak", std::polar(1.0, theta), d, [=, &cfg]() -> std::vector<Record> {
          const DiscPoint<Complex> p(std::polar(1.0, theta));
          const auto t = random_cochain_box(p, peak_box(d, cfg.m, cfg.window), case_seed(cfg, s));
          const auto rep = peak_split(t, theta, cfg.m, cfg.window);
          Record r = make_record("peak", rep.summary);
          r.pass = rep.summary.bound_check;
          r.extra["theta"] = theta;
          r.extra["seed"] = case_seed(cfg, s);
          r.extra["profile"] = rep.profile;
          return {r};
        }));
  }
  return tasks;
}

std::vector<rat::Rational> checked_chain(const SweepConfig& cfg) {
  std::vector<rat::Rational> chain;
  try {
    chain = rat::parse_chain(cfg.chain);
  } catch (const std::exception& e) {
    throw ConfigError("chain", e.what());
  }
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (chain[i] <= 0) throw ConfigError("chain", "entries must be positive");
    if (i > 0 && !rat::refines(chain[i - 1], chain[i])) throw ConfigError("chain", "chain does not refine");
  }
  return chain;
}

std::vector<Task> rational_tasks(const SweepConfig& cfg) {
  const auto chain = checked_chain(cfg);
  if (chain.empty()) return {};
  const long den = chain.back().get_den().get_si();
  std::vector<Task> tasks;
  for (std::size_t k = 0; k < cfg.seeds; ++k) {
    tasks.push_back(guarded("rational", 0.0, 1, [=, &cfg]() -> std::vector<Record> {
      const auto chi = rat::RatChar::finite(cfg.t, cfg.s);
      const auto g = rat::random_series(case_seed(cfg, k), den, 2 * den, 6);
      const auto b = rat::random_series(case_seed(cfg, k) + 1, den, 2 * den, 4);
      const auto c = rat::ideal_part(g, chi);
      std::vector<Record> out;
      for (std::size_t i = 0; i < chain.size(); ++i) {
        const auto fw = rat::flat_witness_residuals(c, b, chain[i], chi, cfg.cutoff);
        Record r;
        r.mode = "rational";
        r.report.lambda = fw.lambda;
        r.report.degree = 1;
        r.report.window = i;
        r.report.blaschke_cutoff = fw.cutoff;
        r.report.residual_sup = fw.r1;
        r.report.certified_error = fw.theta_defect + fw.tail;
        r.report.operator_norm = fw.rho_ratio;
        r.report.bound_check = fw.norm_bound <= 9.0 && fw.rho_ratio <= fw.norm_bound * (1 + 1e-12);
        r.pass = r.report.bound_check;
        r.extra = {{"seed", case_seed(cfg, k)}, {"alpha", rat::to_string(chain[i])}, {"r1", fw.r1},
                   {"r2", fw.r2}, {"theta_defect", fw.theta_defect}, {"tail", fw.tail},
                   {"norm_bound", fw.norm_bound}};
        out.push_back(std::move(r));
      }
      // The character at infinity on f = g - g(0) delta_0.
      rat::RationalSeries f = g;
      f.add(0, -g.at(0));
      f = f.pruned();
      const double fn = f.norm();
      Record r;
      r.mode = "rational";
      r.report.lambda = 0.0;
      r.report.degree = 1;
      r.report.window = chain.size();
      double worst = 0;
      bool ok = true;
      for (const auto& alpha : chain) {
        const auto iw = rat::infinity_witness(f, alpha);
        const double ratio = fn > 0 ? iw.rho_norm / fn : 0.0;
        worst = std::max(worst, ratio);
        r.report.residual_sup = std::max(r.report.residual_sup, iw.r);
        ok = ok && iw.rho_norm <= fn;
      }
      r.report.operator_norm = worst;
      r.report.certified_error = 1.0;
      r.report.bound_check = ok;
      r.pass = ok;
      r.extra = {{"seed", case_seed(cfg, k)}, {"character", "infinity"}};
      out.push_back(std::move(r));
      return out;
    }));
  }
  return tasks;
}

std::vector<Task> halfline_tasks(const SweepConfig& cfg) {
  std::vector<Task> tasks;
  for (Complex lam : cfg.points) {
    for (std::size_t lvl = 0; lvl < cfg.levels; ++lvl) {
      tasks.push_back(guarded("halfline", lam, lvl, [=, &cfg]() -> std::vector<Record> {
        using namespace halfline;
        const HalfPlanePoint p(lam);
        const double scale = std::ldexp(1.0, static_cast<int>(lvl));
        const double h = cfg.step / scale;
        const double len = (cfg.length > 0 ? cfg.length : 8.0 / p.im()) * scale;
        const GridFunction box = GridFunction::sample([](double t) { return Complex(t < 1 ? 1.0 : 0.0); }, 0, 1, h);
        const GridFunction f = GridFunction::sample(ideal_profile(p), 0, 2, h);
        const double hn = h_measure(p, h, len).norm();
        const double tol = 2 * (h * p.im() + std::exp(-p.im() * len));
        const double inv = inverse_identity_residual(box, p, len);
        const double sup = ideal_support_check(f, p, len);
        const auto fw = flat_witness(f, p, 4, len);
        Record r;
        r.mode = "halfline";
        r.report.lambda = lam;
        r.report.degree = lvl;
        r.report.window = f.cells();
        r.report.blaschke_cutoff = 4;
        r.report.residual_sup = inv;
        r.report.certified_error = tol;
        r.report.operator_norm = hn;
        r.report.bound_check = std::abs(hn - 3.0) <= tol && fw.norm_bound <= 9.0 + cfg.slack;
        r.pass = r.report.bound_check;
        r.extra = {{"step", h}, {"length", len}, {"support_residual", sup}, {"flat_r", fw.r},
                   {"flat_norm_bound", fw.norm_bound}};
        return {r};
      }));
    }
  }
  return tasks;
}

std::vector<Task> appendix_tasks(const SweepConfig& cfg) {
  const auto chain = checked_chain(cfg);
  std::vector<Task> tasks;
  for (std::size_t k = 0; k < cfg.seeds; ++k) {
    tasks.push_back(guarded("appendix", 0.0, 2, [=, &cfg]() -> std::vector<Record> {
      const auto chi = rat::RatChar::finite(cfg.t, cfg.s);
      const auto f = rat::smooth_random_cochain(case_seed(cfg, k));
      const auto window = rat::grid_window(12, static_cast<long>(4 * cfg.window));
      std::vector<Record> out;
      double prev = INFINITY;
      for (std::size_t i = 0; i < chain.size(); ++i) {
        const auto rep = rat::prelimit_flat_split(f, chi, chain[i], window, cfg.cutoff);
        Record r;
        r.mode = "appendix";
        r.report.lambda = rep.lambda;
        r.report.degree = 2;
        r.report.window = window.size();
        r.report.blaschke_cutoff = rep.cutoff;
        r.report.residual_sup = rep.residual;
        r.report.certified_error = std::isfinite(prev) ? prev : rep.residual;
        r.report.operator_norm = rep.norm;
        r.report.bound_check = std::isfinite(rep.residual) && rep.residual <= prev;
        r.pass = r.report.bound_check;
        r.extra = {{"seed", case_seed(cfg, k)}, {"alpha", rat::to_string(chain[i])}};
        prev = rep.residual;
        out.push_back(std::move(r));
      }
      return out;
    }));
  }
  return tasks;
}

}  // namespace

std::vector<Complex> disc_grid(const SweepConfig& cfg) {
  if (!cfg.lambdas.empty()) return cfg.lambdas;
  std::vector<Complex> out;
  for (const auto& r : cfg.radii) {
    const double rad = std::stod(r);
    for (std::size_t k = 0; k < cfg.phases; ++k)
      out.push_back(std::polar(rad, 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(cfg.phases)));
  }
  return out;
}

Summary summarize(const std::vector<Record>& records) {
  Summary s;
  for (const auto& r : records) {
    ++s.total;
    if (r.pass) ++s.passed;
    else ++s.failed;
    if (!r.error.empty()) ++s.errors;
    s.max_residual = std::max(s.max_residual, r.report.residual_sup);
    s.max_opnorm = std::max(s.max_opnorm, r.report.operator_norm);
  }
  return s;
}

std::vector<std::vector<Record>> parallel_map(const std::vector<Task>& tasks, std::size_t jobs) {
  std::vector<std::vector<Record>> results(tasks.size());
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) results[i] = tasks[i]();
  };
  if (jobs <= 1) {
    worker();
    return results;
  }
  std::vector<std::jthread> pool;
  for (std::size_t k = 0; k < jobs; ++k) pool.emplace_back(worker);
  pool.clear();
  return results;
}

ReportEnvelope run(const SweepConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<Task> tasks;
  switch (cfg.mode) {
    case Mode::disc_split:
    case Mode::norm_audit:
    case Mode::stabilize:
      tasks = cfg.exact ? disc_tasks(cfg, exact_grid(cfg)) : disc_tasks(cfg, disc_grid(cfg));
      break;
    case Mode::peak:
      tasks = peak_tasks(cfg);
      break;
    case Mode::rational:
      tasks = rational_tasks(cfg);
      break;
    case Mode::halfline:
      tasks = halfline_tasks(cfg);
      break;
    case Mode::appendix:
      tasks = appendix_tasks(cfg);
      break;
  }
  ReportEnvelope env;
  env.config = cfg;
  for (auto& batch : parallel_map(tasks, cfg.jobs))
    for (auto& r : batch) env.records.push_back(std::move(r));
  env.summary = summarize(env.records);
  env.wall_clock = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return env;
}

json to_json(const Record& r) {
  json j = io::to_json(r.report);
  j["mode"] = r.mode;
  j["pass"] = r.pass;
  if (!r.error.empty()) j["error"] = r.error;
  if (!r.extra.empty()) j["extra"] = r.extra;
  return j;
}

json to_json(const ReportEnvelope& env, bool with_wall_clock) {
  json recs = json::array();
  for (const auto& r : env.records) recs.push_back(to_json(r));
  json j = {{"config", to_text(env.config)},
            {"records", std::move(recs)},
            {"summary",
             {{"total", env.summary.total},
              {"passed", env.summary.passed},
              {"failed", env.summary.failed},
              {"errors", env.summary.errors},
              {"max_residual", env.summary.max_residual},
              {"max_opnorm", env.summary.max_opnorm}}}};
  if (with_wall_clock) j["wall_clock"] = env.wall_clock;
  return j;
}

void write_csv(std::ostream& os, const ReportEnvelope& env) {
  io::write_csv_header(os);
  for (const auto& r : env.records) {
    SplitReport rep = r.report;
    rep.bound_check = r.pass;
    io::write_csv_row(os, rep);
  }
}

}  // namespace hochsplit::cli
