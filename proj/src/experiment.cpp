#include "cogcap/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <sstream>
#include <thread>

#include "cogcap/capacity.hpp"
#include "cogcap/numerics.hpp"
#include "cogcap/simulate.hpp"

namespace cogcap {

ConfigError::ConfigError(const std::string& field, const std::string& message)
    : std::runtime_error(field + ": " + message), field_(field) {}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool ends_with_db(const std::string& s) {
  if (s.size() < 2) return false;
  const std::string tail = s.substr(s.size() - 2);
  return tail == "dB" || tail == "db" || tail == "DB";
}

double parse_real(const std::string& text, const std::string& field) {
  const std::string t = trim(text);
  double value = 0.0;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  if (!t.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (t.empty() || ec != std::errc() || ptr != end) {
    throw ConfigError(field, "cannot parse number '" + text + "'");
  }
  return value;
}

std::uint64_t parse_count(const std::string& text, const std::string& field) {
  const std::string t = trim(text);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError(field, "cannot parse unsigned integer '" + text + "'");
  }
  return value;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(trim(cur));
  return parts;
}

double to_db(double linear) { return 10.0 * std::log10(linear); }

std::string flag(bool b) { return b ? "1" : "0"; }

std::string optional_number(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string("none");
}

std::string regime_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::Saturated:
      return "saturated";
    case PolicyKind::ThreeRegime:
      return "water-filling";
    case PolicyKind::PeakRule:
      return "peak";
  }
  return "unknown";
}

// Evaluates fn(i) for i in [0, count) on a few threads; results stay in index order.
template <typename T>
std::vector<T> parallel_map(std::size_t count, const std::function<T(std::size_t)>& fn) {
  std::vector<T> out(count);
  const std::size_t workers =
      std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < count; i = next++) out[i] = fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace

Quantity parse_quantity(const std::string& text, const std::string& field) {
  const std::string t = trim(text);
  if (ends_with_db(t)) {
    const double db = parse_real(t.substr(0, t.size() - 2), field);
    return {t, std::pow(10.0, db / 10.0)};
  }
  return {t, parse_real(t, field)};
}

// Shortest text that parses back to the same double.
static std::string exact_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

ConstraintSpec ExperimentConfig::spec() const {
  ConstraintSpec s{AverageBudget{p_avg.linear}, InterferenceOutage{q_peak.linear}, epsilon,
                   CrossLinkModel(sigma_p_sq)};
  if (budget == "peak") s.budget = PeakBudget{p_peak.linear};
  if (outage == "si") s.outage = SIOutage{p_pp.linear, lambda_th.linear};
  return s;
}

void ExperimentConfig::validate() const {
  if (budget != "average" && budget != "peak") {
    throw ConfigError("budget", "must be 'average' or 'peak'");
  }
  if (outage != "interference" && outage != "si") {
    throw ConfigError("outage", "must be 'interference' or 'si'");
  }
  const auto positive = [](const Quantity& q, const char* field) {
    if (!(q.linear > 0.0) || !std::isfinite(q.linear)) {
      throw ConfigError(field, "must be finite and > 0");
    }
  };
  positive(p_avg, "p_avg");
  positive(p_peak, "p_peak");
  positive(q_peak, "q_peak");
  positive(p_pp, "p_pp");
  positive(lambda_th, "lambda_th");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon", "must lie in [0, 1]");
  if (!(sigma_p_sq >= 0.0 && sigma_p_sq <= 1.0)) {
    throw ConfigError("sigma_p_sq", "must lie in [0, 1]");
  }
  if (!(hp_hat_sq >= 0.0) || !std::isfinite(hp_hat_sq)) {
    throw ConfigError("hp_hat_sq", "must be finite and >= 0");
  }
  if (n == 0) throw ConfigError("n", "must be >= 1");
  if (!(cap_scale > 0.0)) throw ConfigError("cap_scale", "must be > 0");
}

std::string ExperimentConfig::echo() const {
  std::ostringstream os;
  os << "budget=" << budget << '\n'
     << "p_avg=" << p_avg.text << '\n'
     << "p_peak=" << p_peak.text << '\n'
     << "outage=" << outage << '\n'
     << "q_peak=" << q_peak.text << '\n'
     << "p_pp=" << p_pp.text << '\n'
     << "lambda_th=" << lambda_th.text << '\n'
     << "epsilon=" << exact_number(epsilon) << '\n'
     << "sigma_p_sq=" << exact_number(sigma_p_sq) << '\n'
     << "sweep=" << sweep << '\n'
     << "grid=" << grid << '\n'
     << "sigma_p_sq_set=" << sigma_p_sq_set << '\n'
     << "p_avg_set=" << p_avg_set << '\n'
     << "hp_hat_sq=" << exact_number(hp_hat_sq) << '\n'
     << "n=" << n << '\n'
     << "seed=" << seed << '\n'
     << "cap_scale=" << exact_number(cap_scale) << '\n';
  return os.str();
}

void apply_setting(ExperimentConfig& c, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError(trim(assignment), "expected KEY=VALUE");
  }
  const std::string key = trim(assignment.substr(0, eq));
  const std::string value = trim(assignment.substr(eq + 1));

  if (key == "budget") {
    c.budget = value;
  } else if (key == "p_avg") {
    c.p_avg = parse_quantity(value, key);
  } else if (key == "p_peak") {
    c.p_peak = parse_quantity(value, key);
  } else if (key == "outage") {
    c.outage = value;
  } else if (key == "q_peak") {
    c.q_peak = parse_quantity(value, key);
  } else if (key == "p_pp") {
    c.p_pp = parse_quantity(value, key);
  } else if (key == "lambda_th") {
    c.lambda_th = parse_quantity(value, key);
  } else if (key == "epsilon") {
    c.epsilon = parse_real(value, key);
  } else if (key == "sigma_p_sq") {
    c.sigma_p_sq = parse_real(value, key);
  } else if (key == "sweep") {
    c.sweep = value;
  } else if (key == "grid") {
    c.grid = value;
  } else if (key == "sigma_p_sq_set") {
    c.sigma_p_sq_set = value;
  } else if (key == "p_avg_set") {
    c.p_avg_set = value;
  } else if (key == "hp_hat_sq") {
    c.hp_hat_sq = parse_real(value, key);
  } else if (key == "n") {
    c.n = parse_count(value, key);
  } else if (key == "seed") {
    c.seed = parse_count(value, key);
  } else if (key == "cap_scale") {
    c.cap_scale = parse_real(value, key);
  } else {
    throw ConfigError(key, "unknown key");
  }
}

void apply_config_text(ExperimentConfig& config, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    apply_setting(config, line);
  }
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig c;
  apply_config_text(c, text);
  return c;
}

std::vector<Quantity> expand_grid(const std::string& grid, const std::string& field) {
  std::vector<Quantity> out;
  const std::string g = trim(grid);
  if (g.empty()) throw ConfigError(field, "empty grid");

  if (g.find(':') != std::string::npos) {
    const auto parts = split(g, ':');
    if (parts.size() != 3) throw ConfigError(field, "range must be lo:hi:step");
    const bool db = ends_with_db(parts[0]);
    const auto strip = [db](const std::string& s) {
      return db && ends_with_db(s) ? s.substr(0, s.size() - 2) : s;
    };
    const double lo = parse_real(strip(parts[0]), field);
    const double hi = parse_real(strip(parts[1]), field);
    const double step = parse_real(strip(parts[2]), field);
    if (!(step > 0.0) || !(hi >= lo)) throw ConfigError(field, "range needs lo <= hi and step > 0");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    if (count > 1'000'000) throw ConfigError(field, "range has too many points");
    for (std::size_t k = 0; k < count; ++k) {
      const std::string text = format_number(lo + static_cast<double>(k) * step);
      out.push_back(parse_quantity(db ? text + "dB" : text, field));
    }
  } else {
    for (const auto& item : split(g, ',')) out.push_back(parse_quantity(item, field));
  }
  for (std::size_t k = 1; k < out.size(); ++k) {
    if (!(out[k].linear > out[k - 1].linear)) {
      throw ConfigError(field, "grid must be strictly increasing");
    }
  }
  return out;
}

std::vector<std::string> preset_defaults(const std::string& preset) {
  const std::vector<std::string> interference = {"outage=interference", "q_peak=10",
                                                 "epsilon=0.042"};
  const std::vector<std::string> si = {"outage=si", "p_pp=10", "lambda_th=1", "epsilon=0.24"};
  const auto join = [](std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  if (preset == "fig2") return {"grid=0.05:5:0.05"};
  if (preset == "fig3") {
    return join({"budget=average", "p_avg=1", "sigma_p_sq=0.5", "hp_hat_sq=1",
                 "grid=0.05:5:0.05"},
                interference);
  }
  if (preset == "fig4") {
    return join({"budget=average", "sigma_p_sq_set=0,0.1,0.5,1", "grid=-10dB:30dB:2.5dB"},
                interference);
  }
  if (preset == "fig5") {
    return join({"budget=average", "p_avg_set=0dB,5dB,10dB,15dB", "grid=0:1:0.05"},
                interference);
  }
  if (preset == "fig6") {
    return join({"budget=average", "sigma_p_sq_set=0,0.1,0.5,1", "grid=-10dB:30dB:2.5dB"}, si);
  }
  if (preset == "fig7" || preset == "regions") {
    return {"q_peak=10", "p_pp=10", "lambda_th=1", "sigma_p_sq=0.5", "grid=0:1:0.01"};
  }
  if (preset == "fig8") {
    return join({"budget=peak", "sigma_p_sq_set=0,0.1,0.5,1", "grid=-10dB:30dB:2.5dB"},
                interference);
  }
  throw ConfigError("preset", "unknown preset '" + preset + "'");
}

void Table::write_csv(std::ostream& os) const {
  const auto line = [&os](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k) os << ',';
      os << cells[k];
    }
    os << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
}

namespace experiment {

namespace {

std::vector<double> parse_sigma_set(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split(s, ',')) {
    const double v = parse_real(item, "sigma_p_sq_set");
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("sigma_p_sq_set", "values must lie in [0, 1]");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("sigma_p_sq_set", "empty set");
  return out;
}

std::vector<Quantity> parse_power_set(const std::string& s) {
  std::vector<Quantity> out;
  for (const auto& item : split(s, ',')) out.push_back(parse_quantity(item, "p_avg_set"));
  if (out.empty()) throw ConfigError("p_avg_set", "empty set");
  return out;
}

// Policy diagnostics shared by eval and the sweeps.
struct Diagnostics {
  std::string regime;
  std::optional<double> g_s1;
  std::optional<double> hp0;
  std::optional<double> g_s2;  // only when the cap does not depend on the estimate
};

Diagnostics diagnose(const PowerPolicy& pol) {
  Diagnostics d;
  d.regime = regime_name(pol.kind());
  const ConstraintSpec& spec = pol.spec();
  if (pol.kind() == PolicyKind::ThreeRegime) {
    d.g_s1 = pol.g_s1();
    d.hp0 = policy::threshold_hp0(pol.g_s1(), spec);
    if (spec.model.no_csi() || spec.epsilon == 1.0) {
      d.g_s2 = policy::gs2_of(pol.g_s1(), pol.cap({0.0}));
    }
  } else if (pol.kind() == PolicyKind::PeakRule) {
    d.hp0 = policy::estimate_threshold(spec, spec.p_peak());
  }
  return d;
}

double swept_db(const Quantity& q) { return to_db(q.linear); }

// Capacity of `config` with the named key replaced by `value`.
ExperimentConfig with_setting(ExperimentConfig c, const std::string& key, const std::string& value) {
  apply_setting(c, key + "=" + value);
  return c;
}

Table sweep_g_function(const ExperimentConfig& c) {
  Table t{{"x", "e1_x", "g_x_linear"}, {}};
  for (const auto& q : expand_grid(c.grid, "grid")) {
    if (!(q.linear > 0.0)) throw ConfigError("grid", "x must be > 0");
    t.rows.push_back({q.text, format_number(numerics::exp_integral_e1(q.linear)),
                      format_number(policy::g_function(q.linear))});
  }
  return t;
}

Table sweep_power_profile(const ExperimentConfig& c) {
  c.validate();
  const PowerPolicy pol = policy::solve_policy(c.spec());
  const Estimate est{c.hp_hat_sq};
  const PeakCap cap = pol.cap(est);
  const Diagnostics d = diagnose(pol);
  std::optional<double> g2;
  if (d.g_s1) g2 = policy::gs2_of(*d.g_s1, cap);

  Table t{{"hs_sq", "hp_hat_sq", "power_linear", "cap_linear", "regime", "g_s1", "g_s2"}, {}};
  for (const auto& q : expand_grid(c.grid, "grid")) {
    t.rows.push_back({q.text, format_number(c.hp_hat_sq),
                      format_number(pol.power(q.linear, est)), format_number(cap.value),
                      d.regime, optional_number(d.g_s1), optional_number(g2)});
  }
  return t;
}

// Capacity against the budget over sigma_p_sq_set; `budget_key` is p_avg or p_peak.
Table sweep_capacity_curves(const ExperimentConfig& c, const std::string& budget_key) {
  c.validate();
  const auto grid = expand_grid(c.grid, "grid");
  const auto sigmas = parse_sigma_set(c.sigma_p_sq_set);
  const bool average = budget_key == "p_avg";

  // Limits that do not depend on the swept budget.
  ExperimentConfig no_csi = c;
  no_csi.sigma_p_sq = 1.0;
  const double no_csi_cap = policy::peak_cap(no_csi.spec(), {0.0}).value;
  const double perfect_limit =
      capacity::asymptotic_capacity(AsymptoticKind::HighPowerPerfectCsi,
                                    capacity::q_equivalent(c.spec()))
          .value;
  std::string saturation_limit = "none";
  if (no_csi_cap > 0.0 && std::isfinite(no_csi_cap)) {
    saturation_limit = format_number(
        capacity::asymptotic_capacity(AsymptoticKind::HighAverageNoCsi, no_csi_cap).value);
  }

  const std::size_t count = grid.size() * sigmas.size();
  const auto rows = parallel_map<std::vector<std::string>>(count, [&](std::size_t i) {
    const Quantity& q = grid[i / sigmas.size()];
    const double s2 = sigmas[i % sigmas.size()];
    ExperimentConfig point = with_setting(c, budget_key, q.text);
    point.sigma_p_sq = s2;
    const PowerPolicy pol = policy::solve_policy(point.spec());
    const CapacityResult cap = capacity::ergodic_capacity(pol);
    const Diagnostics d = diagnose(pol);
    const double reference =
        average ? capacity::unconstrained_capacity(q.linear)
                : capacity::asymptotic_capacity(AsymptoticKind::UnboundedCapPeak, q.linear).value;
    return std::vector<std::string>{q.text,
                                    format_number(swept_db(q)),
                                    format_number(q.linear),
                                    format_number(s2),
                                    format_number(cap.value),
                                    format_number(cap.err_estimate),
                                    d.regime,
                                    optional_number(d.g_s1),
                                    optional_number(d.hp0),
                                    saturation_limit,
                                    format_number(reference),
                                    format_number(perfect_limit)};
  });
  const std::string unbounded = average ? "unconstrained_npcu" : "unbounded_cap_npcu";
  const std::string limit = average ? "saturation_limit_npcu" : "high_peak_limit_npcu";
  return {{budget_key + "_given", budget_key + "_db", budget_key + "_linear", "sigma_p_sq",
           "capacity_npcu", "err_npcu", "regime", "g_s1", "hp_hat_threshold", limit, unbounded,
           "perfect_csi_limit_npcu"},
          rows};
}

Table sweep_capacity_loss(const ExperimentConfig& c) {
  c.validate();
  const auto grid = expand_grid(c.grid, "grid");
  const auto powers = parse_power_set(c.p_avg_set);
  for (const auto& q : grid) {
    if (!(q.linear >= 0.0 && q.linear <= 1.0)) throw ConfigError("grid", "sigma_p_sq must lie in [0, 1]");
  }
  const std::size_t count = grid.size() * powers.size();
  const auto rows = parallel_map<std::vector<std::string>>(count, [&](std::size_t i) {
    const Quantity& p = powers[i / grid.size()];
    const Quantity& s = grid[i % grid.size()];
    const double loss = capacity::capacity_loss(p.linear, s.linear, c.spec());
    return std::vector<std::string>{p.text, format_number(swept_db(p)), format_number(p.linear),
                                    s.text, format_number(loss)};
  });
  return {{"p_avg_given", "p_avg_db", "p_avg_linear", "sigma_p_sq", "capacity_loss_percent"},
          rows};
}

Table sweep_regions(const ExperimentConfig& c) {
  c.validate();
  const auto grid = expand_grid(c.grid, "grid");
  for (const auto& q : grid) {
    if (!(q.linear >= 0.0 && q.linear <= 1.0)) throw ConfigError("grid", "eps must lie in [0, 1]");
  }
  const double q_eq = c.p_pp.linear / c.lambda_th.linear;
  const std::size_t count = grid.size() * grid.size();
  const auto rows = parallel_map<std::vector<std::string>>(count, [&](std::size_t i) {
    const double e1 = grid[i / grid.size()].linear;
    const double e2 = grid[i % grid.size()].linear;
    const RegionFlags f =
        capacity::region_membership({e1, e2, c.sigma_p_sq, c.q_peak.linear, q_eq});
    return std::vector<std::string>{format_number(e1), format_number(e2), flag(f.in_r1),
                                    flag(f.in_r2), flag(f.in_r3)};
  });
  return {{"eps1", "eps2", "in_r1", "in_r2", "in_r3"}, rows};
}

Table sweep_free_form(const ExperimentConfig& c) {
  if (c.sweep.empty()) throw ConfigError("sweep", "no swept key and no preset given");
  static const std::vector<std::string> sweepable = {"p_avg",   "p_peak",     "q_peak",
                                                     "p_pp",    "lambda_th",  "epsilon",
                                                     "sigma_p_sq"};
  if (std::find(sweepable.begin(), sweepable.end(), c.sweep) == sweepable.end()) {
    throw ConfigError("sweep", "cannot sweep '" + c.sweep + "'");
  }
  c.validate();
  const auto grid = expand_grid(c.grid, "grid");
  std::vector<ExperimentConfig> points;
  for (const auto& q : grid) {
    points.push_back(with_setting(c, c.sweep, q.text));
    points.back().validate();
  }
  const auto rows = parallel_map<std::vector<std::string>>(grid.size(), [&](std::size_t i) {
    const ExperimentConfig& point = points[i];
    const PowerPolicy pol = policy::solve_policy(point.spec());
    const CapacityResult cap = capacity::ergodic_capacity(pol);
    std::string closed = "none";
    if (point.sigma_p_sq == 1.0) {
      closed = format_number(capacity::closed_form_no_csi(point.spec()).value);
    }
    const Diagnostics d = diagnose(pol);
    return std::vector<std::string>{grid[i].text,
                                    format_number(grid[i].linear),
                                    format_number(cap.value),
                                    format_number(cap.err_estimate),
                                    closed,
                                    d.regime,
                                    flag(pol.kind() == PolicyKind::Saturated),
                                    optional_number(d.g_s1),
                                    flag(d.g_s2.has_value()),
                                    optional_number(d.hp0)};
  });
  return {{c.sweep + "_given", c.sweep + "_linear", "capacity_quadrature_npcu", "err_npcu",
           "capacity_closed_form_npcu", "regime", "saturated", "g_s1", "g_s2_present",
           "hp_hat_threshold"},
          rows};
}

}  // namespace

Table run_eval(const ExperimentConfig& config, std::ostream& report) {
  config.validate();
  const ConstraintSpec spec = config.spec();
  const PowerPolicy pol = policy::solve_policy(spec);
  const Diagnostics d = diagnose(pol);
  const CapacityResult quad = capacity::ergodic_capacity(pol);

  report << "regime: " << d.regime << '\n';
  if (d.g_s1) report << "g_s1: " << format_number(*d.g_s1) << '\n';
  if (d.g_s2) report << "g_s2: " << format_number(*d.g_s2) << '\n';
  if (d.hp0) report << "hp_hat_threshold: " << format_number(*d.hp0) << '\n';
  if (spec.model.no_csi()) {
    report << "cap_linear: " << format_number(pol.cap({0.0}).value) << '\n';
  }
  report << "capacity (quadrature): " << format_number(quad.value) << " npcu (err "
         << format_number(quad.err_estimate) << ")\n";

  std::string closed = "none";
  if (spec.model.no_csi()) {
    const double v = capacity::closed_form_no_csi(spec).value;
    closed = format_number(v);
    report << "capacity (closed-form): " << closed << " npcu\n";
  }
  std::string unconstrained = "none";
  if (spec.has_average_budget()) {
    unconstrained = format_number(capacity::unconstrained_capacity(spec.p_avg()));
    report << "capacity without outage constraint: " << unconstrained << " npcu\n";
  }
  return {{"capacity_quadrature_npcu", "err_npcu", "capacity_closed_form_npcu",
           "capacity_unconstrained_npcu", "regime", "g_s1", "g_s2", "hp_hat_threshold"},
          {{format_number(quad.value), format_number(quad.err_estimate), closed, unconstrained,
            d.regime, optional_number(d.g_s1), optional_number(d.g_s2), optional_number(d.hp0)}}};
}

Table run_sweep(const std::string& preset, const ExperimentConfig& config) {
  if (preset.empty()) return sweep_free_form(config);
  if (preset == "fig2") return sweep_g_function(config);
  if (preset == "fig3") return sweep_power_profile(config);
  if (preset == "fig4" || preset == "fig6") {
    ExperimentConfig c = config;
    c.budget = "average";
    return sweep_capacity_curves(c, "p_avg");
  }
  if (preset == "fig5") return sweep_capacity_loss(config);
  if (preset == "fig7" || preset == "regions") return sweep_regions(config);
  if (preset == "fig8") {
    ExperimentConfig c = config;
    c.budget = "peak";
    return sweep_capacity_curves(c, "p_peak");
  }
  throw ConfigError("preset", "unknown preset '" + preset + "'");
}

VerifyOutcome run_verify(const ExperimentConfig& config, std::ostream& report) {
  config.validate();
  const ConstraintSpec spec = config.spec();
  const PowerPolicy optimal = policy::solve_policy(spec);
  const double analytic = capacity::ergodic_capacity(optimal).value;
  const PowerPolicy tested =
      config.cap_scale == 1.0 ? optimal : optimal.with_cap_scale(config.cap_scale);

  const ChannelSample sample = simulate::sample_world(config.n, config.seed, config.sigma_p_sq);
  const SimulationReport r = simulate::verify_constraints(tested, sample);
  const auto checks = simulate::check_report(tested, r, analytic);

  report << "n: " << r.n << "  seed: " << r.seed << '\n';
  report << "capacity analytic: " << format_number(analytic)
         << " npcu  monte-carlo: " << format_number(r.rate_mean) << " +- "
         << format_number(r.rate_ci_half_width) << " npcu\n";
  if (spec.has_average_budget()) {
    report << "mean power: " << format_number(r.mean_power) << " (budget "
           << format_number(spec.p_avg()) << ", se " << format_number(r.power_std_err) << ")\n";
  } else {
    report << "max power: " << format_number(r.max_power) << " (budget "
           << format_number(spec.p_peak()) << ")\n";
  }
  report << "outage: " << format_number(r.outage_rate) << " over " << r.active
         << " active draws (eps " << format_number(spec.epsilon) << ")\n";
  for (std::size_t k = 0; k < r.strata.size(); ++k) {
    const auto& s = r.strata[k];
    const double rate = s.active ? static_cast<double>(s.events) / s.active : 0.0;
    report << "  decile " << k + 1 << " [" << format_number(s.lo) << ", " << format_number(s.hi)
           << "): " << format_number(rate) << " of " << s.active << '\n';
  }

  VerifyOutcome out;
  out.pass = true;
  out.table.header = {"metric", "observed", "bound", "pass"};
  for (const auto& c : checks) {
    out.pass = out.pass && c.pass;
    out.table.rows.push_back(
        {c.metric, format_number(c.observed), format_number(c.bound), flag(c.pass)});
    if (!c.pass) {
      report << "FAIL " << c.metric << ": " << format_number(c.observed) << " exceeds "
             << format_number(c.bound) << '\n';
    }
  }
  report << (out.pass ? "PASS" : "FAIL") << '\n';
  return out;
}

Table1Outcome run_table1() {
  struct Row {
    bool average;
    double power;
    bool si;
    double eps;
  };
  std::vector<Row> grid;
  const double powers[] = {0.01, 0.5, 1.0, 2.0, 3.1545, 10.0};
  const double epsilons[] = {0.042, 0.24, 1.0};
  for (bool average : {true, false}) {
    for (bool si : {false, true}) {
      for (double eps : epsilons) {
        for (double p : powers) grid.push_back({average, p, si, eps});
      }
    }
  }

  const auto rows = parallel_map<std::vector<std::string>>(grid.size(), [&](std::size_t i) {
    const Row& r = grid[i];
    ConstraintSpec spec{AverageBudget{r.power}, InterferenceOutage{10.0}, r.eps,
                        CrossLinkModel(1.0)};
    if (!r.average) spec.budget = PeakBudget{r.power};
    if (r.si) spec.outage = SIOutage{10.0, 1.0};

    const PowerPolicy pol = policy::solve_policy(spec);
    const PeakCap cap = pol.cap({0.0});
    std::string kind = "peak";
    if (r.average) {
      if (pol.kind() == PolicyKind::Saturated) {
        kind = "saturated";
      } else {
        kind = policy::gs2_of(pol.g_s1(), cap) ? "middle" : "low";
      }
    }
    const double closed = capacity::closed_form_no_csi(spec).value;
    const double quad = capacity::ergodic_capacity(pol).value;
    return std::vector<std::string>{r.average ? "average" : "peak",
                                    format_number(r.power),
                                    r.si ? "si" : "interference",
                                    "10",
                                    format_number(r.eps),
                                    format_number(cap.value),
                                    kind,
                                    format_number(closed),
                                    format_number(quad),
                                    format_number(std::abs(closed - quad))};
  });

  Table1Outcome out;
  out.table.header = {"budget",    "power_linear", "outage",           "q_peak",
                      "epsilon",   "cap_linear",   "row",              "closed_form_npcu",
                      "quadrature_npcu", "abs_diff_npcu"};
  out.table.rows = rows;
  for (const auto& r : rows) out.max_discrepancy = std::max(out.max_discrepancy, std::stod(r.back()));
  return out;
}

}  // namespace experiment
}  // namespace cogcap
