#include "cogcap/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <thread>

#include "cogcap/numerics.hpp"

namespace cogcap::simulate {

namespace {

std::size_t block_count(std::uint64_t n) {
  return static_cast<std::size_t>((n + kBlockSize - 1) / kBlockSize);
}

std::size_t worker_count(std::size_t blocks) {
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  return std::min(hw, blocks);
}

// Runs fn(b) for every block index; blocks are dealt round-robin to workers.
void for_each_block(std::size_t blocks, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = worker_count(blocks);
  if (workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) fn(b);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t b = w; b < blocks; b += workers) fn(b);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

class BlockStream {
 public:
  BlockStream(std::uint64_t seed, std::uint64_t block) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
    engine_.seed(seq);
  }

  // Uniform on (0, 1] from the top 53 bits.
  double uniform_open_closed() {
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
  }

  // Unit-variance circular Gaussian by Box-Muller, each part of variance 1/2.
  void complex_gaussian(double& re, double& im) {
    const double radius = std::sqrt(-std::log(uniform_open_closed()));
    const double angle = 2.0 * std::numbers::pi * uniform_open_closed();
    re = radius * std::cos(angle);
    im = radius * std::sin(angle);
  }

 private:
  std::mt19937_64 engine_;
};

ChannelDraw draw_one(BlockStream& rng, double a, double b) {
  double re = 0.0;
  double im = 0.0;
  ChannelDraw d{};
  rng.complex_gaussian(re, im);
  d.hs_sq = re * re + im * im;
  rng.complex_gaussian(re, im);
  d.hpp_sq = re * re + im * im;
  double er = 0.0;
  double ei = 0.0;
  rng.complex_gaussian(re, im);
  rng.complex_gaussian(er, ei);
  d.hp_hat_sq = re * re + im * im;
  const double pr = a * re + b * er;
  const double pi = a * im + b * ei;
  d.hp_sq = pr * pr + pi * pi;
  return d;
}

// Running mean and second central moment, merged pairwise (Chan et al.).
struct Moments {
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    count += 1.0;
    const double delta = x - mean;
    mean += delta / count;
    m2 += delta * (x - mean);
  }

  void merge(const Moments& o) {
    if (o.count == 0.0) return;
    const double total = count + o.count;
    const double delta = o.mean - mean;
    mean += delta * o.count / total;
    m2 += o.m2 + delta * delta * count * o.count / total;
    count = total;
  }

  double std_err() const {
    if (count < 2.0) return 0.0;
    return std::sqrt(m2 / (count - 1.0) / count);
  }
};

struct Tally {
  Moments power;
  Moments rate;
  double max_power = 0.0;
  std::uint64_t active = 0;
  std::uint64_t events = 0;
  std::array<std::uint64_t, 10> stratum_active{};
  std::array<std::uint64_t, 10> stratum_events{};
};

std::array<double, 11> decile_edges() {
  std::array<double, 11> edges{};
  for (int k = 1; k < 10; ++k) edges[k] = -std::log1p(-k / 10.0);
  edges[10] = fading::kInfinity;
  return edges;
}

std::size_t decile_of(double v, const std::array<double, 11>& edges) {
  const auto it = std::upper_bound(edges.begin() + 1, edges.begin() + 10, v);
  return static_cast<std::size_t>(it - (edges.begin() + 1));
}

}  // namespace

ChannelSample sample_world(std::uint64_t n, std::uint64_t seed, double sigma_p_sq) {
  if (n == 0) throw DomainError("sample_world: n must be >= 1");
  const CrossLinkModel model(sigma_p_sq);
  const double a = std::sqrt(1.0 - model.sigma_p_sq());
  const double b = std::sqrt(model.sigma_p_sq());

  ChannelSample sample;
  sample.seed = seed;
  sample.sigma_p_sq = sigma_p_sq;
  sample.draws.resize(static_cast<std::size_t>(n));
  for_each_block(block_count(n), [&](std::size_t blk) {
    BlockStream rng(seed, blk);
    const std::size_t begin = blk * kBlockSize;
    const std::size_t end = std::min<std::size_t>(begin + kBlockSize, sample.draws.size());
    for (std::size_t i = begin; i < end; ++i) sample.draws[i] = draw_one(rng, a, b);
  });
  return sample;
}

bool is_outage(const ConstraintSpec& spec, const ChannelDraw& draw, double power) {
  if (!(power > 0.0)) return false;
  if (const auto* io = std::get_if<InterferenceOutage>(&spec.outage)) {
    return power * draw.hp_sq >= io->q_peak * (1.0 + kOutageSlack);
  }
  const auto& si = std::get<SIOutage>(spec.outage);
  return si.lambda_th * power * draw.hp_sq >= si.p_pp * draw.hpp_sq * (1.0 + kOutageSlack);
}

SimulationReport verify_constraints(const PowerPolicy& pol, const ChannelSample& sample) {
  if (sample.draws.empty()) throw DomainError("verify_constraints: empty sample");
  if (sample.sigma_p_sq != pol.spec().model.sigma_p_sq()) {
    throw DomainError("verify_constraints: sample drawn for a different sigma_p_sq");
  }
  const auto edges = decile_edges();
  const std::size_t blocks = block_count(sample.draws.size());
  std::vector<Tally> tallies(blocks);

  for_each_block(blocks, [&](std::size_t blk) {
    Tally& t = tallies[blk];
    const std::size_t begin = blk * kBlockSize;
    const std::size_t end = std::min<std::size_t>(begin + kBlockSize, sample.draws.size());
    for (std::size_t i = begin; i < end; ++i) {
      const ChannelDraw& d = sample.draws[i];
      const double p = pol.power(d.hs_sq, {d.hp_hat_sq});
      t.power.add(p);
      t.rate.add(std::log1p(p * d.hs_sq));
      t.max_power = std::max(t.max_power, p);
      if (p > 0.0) {
        const std::size_t k = decile_of(d.hp_hat_sq, edges);
        ++t.active;
        ++t.stratum_active[k];
        if (is_outage(pol.spec(), d, p)) {
          ++t.events;
          ++t.stratum_events[k];
        }
      }
    }
  });

  Tally all;
  for (const Tally& t : tallies) {
    all.power.merge(t.power);
    all.rate.merge(t.rate);
    all.max_power = std::max(all.max_power, t.max_power);
    all.active += t.active;
    all.events += t.events;
    for (std::size_t k = 0; k < 10; ++k) {
      all.stratum_active[k] += t.stratum_active[k];
      all.stratum_events[k] += t.stratum_events[k];
    }
  }

  SimulationReport r;
  r.n = sample.draws.size();
  r.seed = sample.seed;
  r.mean_power = all.power.mean;
  r.power_std_err = all.power.std_err();
  r.max_power = all.max_power;
  r.active = all.active;
  r.outage_events = all.events;
  r.outage_rate = all.active == 0 ? 0.0 : static_cast<double>(all.events) / all.active;
  r.rate_mean = all.rate.mean;
  r.rate_std_err = all.rate.std_err();
  r.rate_ci_half_width = 1.96 * r.rate_std_err;
  for (std::size_t k = 0; k < 10; ++k) {
    r.strata[k] = {edges[k], edges[k + 1], all.stratum_active[k], all.stratum_events[k]};
  }
  return r;
}

CapacityResult mc_capacity(const PowerPolicy& pol, const ChannelSample& sample) {
  const SimulationReport r = verify_constraints(pol, sample);
  return {r.rate_mean, Method::MonteCarlo, r.rate_ci_half_width};
}

namespace {

double outage_bound(double eps, std::uint64_t n) {
  if (n == 0) return eps;
  return eps + 3.0 * std::sqrt(eps * (1.0 - eps) / static_cast<double>(n));
}

}  // namespace

std::vector<Check> check_report(const PowerPolicy& pol, const SimulationReport& r,
                                double analytic) {
  const ConstraintSpec& spec = pol.spec();
  const double eps = spec.epsilon;
  std::vector<Check> checks;

  const double overall_bound = outage_bound(eps, r.active);
  checks.push_back({"outage", r.outage_rate, overall_bound, r.outage_rate <= overall_bound});
  for (std::size_t k = 0; k < r.strata.size(); ++k) {
    const StratumOutage& s = r.strata[k];
    const double rate = s.active == 0 ? 0.0 : static_cast<double>(s.events) / s.active;
    const double bound = outage_bound(eps, s.active);
    checks.push_back({"outage_decile_" + std::to_string(k + 1), rate, bound, rate <= bound});
  }

  if (spec.has_average_budget()) {
    const double slack = 3.0 * r.power_std_err;
    if (pol.kind() == PolicyKind::ThreeRegime) {
      const double gap = std::abs(r.mean_power - spec.p_avg());
      checks.push_back({"mean_power_gap", gap, slack, gap <= slack});
    } else {
      checks.push_back({"mean_power", r.mean_power, spec.p_avg() + slack,
                        r.mean_power <= spec.p_avg() + slack});
    }
  } else {
    const double bound = spec.p_peak() * (1.0 + 1e-12);
    checks.push_back({"max_power", r.max_power, bound, r.max_power <= bound});
  }

  const double gap = std::abs(r.rate_mean - analytic);
  const double slack = std::max(3.0 * r.rate_std_err, 1e-9);
  checks.push_back({"rate_gap", gap, slack, gap <= slack});
  return checks;
}

}  // namespace cogcap::simulate
