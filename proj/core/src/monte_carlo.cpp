#include "finitecell/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace finitecell {

namespace {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

double inverse_normal_cdf(double p) {
  // Wichura's rational approximations: one kernel for the bulk, two for
  // the tails in sqrt(-log) coordinates.
  if (!(p > 0.0) || !(p < 1.0)) {
    throw std::domain_error("inverse normal CDF needs p in (0, 1)");
  }
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                 6.7265770927008700853e4) *
                    r +
                4.5921953931549871457e4) *
                   r +
               1.3731693765509461125e4) *
                  r +
              1.9715909503065514427e3) *
                 r +
             1.3314166789178437745e2) *
                r +
            3.3871328727963666080e0) /
           (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                 3.9307895800092710610e4) *
                    r +
                2.1213794301586595867e4) *
                   r +
               5.3941960214247511077e3) *
                  r +
              6.8718700749205790830e2) *
                 r +
             4.2313330701600911252e1) *
                r +
            1.0);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) *
                    r +
                2.41780725177450611770e-1) *
                   r +
               1.27045825245236838258e0) *
                  r +
              3.64784832476320460504e0) *
                 r +
             5.76949722146069140550e0) *
                r +
            4.63033784615654529590e0) *
               r +
           1.42343711074968357734e0) /
          (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) *
                    r +
                1.51986665636164571966e-2) *
                   r +
               1.48103976427480074590e-1) *
                  r +
              6.89767334985100004550e-1) *
                 r +
             1.67638483018380384940e0) *
                r +
            2.05319162663775882187e0) *
               r +
           1.0);
  } else {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) *
                    r +
                1.24266094738807843860e-3) *
                   r +
               2.65321895265761230930e-2) *
                  r +
              2.96560571828504891230e-1) *
                 r +
             1.78482653991729133580e0) *
                r +
            5.46378491116411436990e0) *
               r +
           6.65790464350110377720e0) /
          (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) *
                    r +
                1.84631831751005468180e-5) *
                   r +
               7.86869131145613259100e-4) *
                  r +
              1.48753612908506148525e-2) *
                 r +
             1.36929880922735805310e-1) *
                r +
            5.99832206555887937690e-1) *
               r +
           1.0);
  }
  return q < 0.0 ? -val : val;
}

TrialStream::TrialStream(std::uint64_t seed, std::uint64_t trial)
    : key_(mix64(mix64(seed) ^
                 (0x9e3779b97f4a7c15ull * (trial + 0x632be59bd9b4e019ull)))) {}

std::uint64_t TrialStream::next_u64() {
  return mix64(key_ + 0x9e3779b97f4a7c15ull * ++counter_);
}

double TrialStream::next_uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double TrialStream::next_normal() {
  // Offset the lattice to keep p strictly inside (0, 1).
  const double p =
      (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  return inverse_normal_cdf(p);
}

double TrialStream::next_exponential() {
  return -std::log1p(-next_uniform());
}

std::vector<Vec2> sample_ap_positions(int n_aps, const Disk& disk,
                                      TrialStream& stream) {
  if (n_aps < 1) throw std::invalid_argument("n_aps must be at least 1");
  if (!(disk.radius > 0.0)) {
    throw std::invalid_argument("disk radius must be positive");
  }
  std::vector<Vec2> pts(static_cast<std::size_t>(n_aps));
  for (auto& p : pts) {
    const double r = disk.radius * std::sqrt(stream.next_uniform());
    const double th = 2.0 * std::numbers::pi * stream.next_uniform();
    p.x = r * std::cos(th);
    p.y = r * std::sin(th);
  }
  return pts;
}

double realize_sinr(double offset, std::span<const Vec2> positions,
                    std::span<const double> fading,
                    std::span<const double> shadow_normals,
                    const NetworkModel& model) {
  const std::size_t n = positions.size();
  if (fading.size() != n) {
    throw std::invalid_argument("one fading draw per AP required");
  }
  const double sz = model.sigma_z();
  const bool shadowed = sz > 0.0;
  if (shadowed && shadow_normals.size() != n) {
    throw std::invalid_argument("one shadowing draw per AP required");
  }

  std::size_t serving = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = positions[i].x - offset;
    const double dy = positions[i].y;
    const double dist2 = dx * dx + dy * dy;
    if (dist2 < best) {
      best = dist2;
      serving = i;
    }
  }
  if (!(best > 0.0)) {
    throw std::domain_error("serving AP coincides with the evaluation point");
  }

  const double p = model.tx_power_mw();
  const double alpha = model.path_loss_exponent;
  double signal = 0.0;
  double denom = model.noise_power_mw();
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = positions[i].x - offset;
    const double dy = positions[i].y;
    const double dist = std::sqrt(dx * dx + dy * dy);
    double pow_rx = p * fading[i] * std::pow(dist, -alpha);
    if (shadowed) pow_rx *= std::exp(sz * shadow_normals[i]);
    if (i == serving) {
      signal = pow_rx;
    } else {
      denom += pow_rx;
    }
  }
  return signal / denom;
}

double simulate_trial(double offset, const NetworkModel& model,
                      TrialStream& stream, bool negate_shadow) {
  const int n = model.n_aps;
  std::vector<Vec2> pts;
  for (int attempt = 0; attempt < 100; ++attempt) {
    pts = sample_ap_positions(n, model.disk, stream);
    bool on_top = false;
    for (const auto& p : pts) {
      if (p.x == offset && p.y == 0.0) {
        on_top = true;
        break;
      }
    }
    if (!on_top) break;
    pts.clear();
  }
  if (pts.empty()) {
    throw std::runtime_error("could not draw a layout off the evaluation point");
  }

  std::vector<double> fading(static_cast<std::size_t>(n));
  for (auto& h : fading) h = stream.next_exponential();

  std::vector<double> shadow;
  if (model.sigma_z() > 0.0) {
    shadow.resize(static_cast<std::size_t>(n));
    for (auto& g : shadow) {
      g = stream.next_normal();
      if (negate_shadow) g = -g;
    }
  }
  return realize_sinr(offset, pts, fading, shadow, model);
}

namespace {

void check_sim_inputs(double offset, const NetworkModel& model,
                      const SimConfig& cfg) {
  model.validate();
  if (!(offset >= 0.0) || !(offset <= model.disk.radius)) {
    throw std::invalid_argument(
        "evaluation point offset must lie in [0, radius]");
  }
  if (model.interference_limited() && model.n_aps < 2) {
    throw std::invalid_argument(
        "an interference-limited single-AP network has unbounded SINR");
  }
  if (cfg.trials < 1) throw std::invalid_argument("trials must be positive");
  if (cfg.threads < 0) {
    throw std::invalid_argument("threads must be non-negative");
  }
}

// Runs metric(sinr) over all trials in fixed 4096-trial chunks.  Chunk
// partial sums are reduced in chunk order, so the result is independent
// of the number of worker threads.
template <typename Metric>
Estimate run_trials(double offset, const NetworkModel& model,
                    const SimConfig& cfg, Metric&& metric) {
  constexpr long kChunk = 4096;
  const long trials = cfg.trials;
  const long n_chunks = (trials + kChunk - 1) / kChunk;

  std::vector<double> sums(static_cast<std::size_t>(n_chunks), 0.0);
  std::vector<double> sq_sums(static_cast<std::size_t>(n_chunks), 0.0);

  auto run_chunk = [&](long c) {
    const long lo = c * kChunk;
    const long hi = std::min(lo + kChunk, trials);
    double s = 0.0;
    double ss = 0.0;
    for (long t = lo; t < hi; ++t) {
      const auto ut = static_cast<std::uint64_t>(t);
      const std::uint64_t trial_key = cfg.antithetic ? (ut >> 1) : ut;
      const bool negate = cfg.antithetic && (ut & 1u);
      TrialStream stream(cfg.seed, trial_key);
      const double v = metric(simulate_trial(offset, model, stream, negate));
      s += v;
      ss += v * v;
    }
    sums[static_cast<std::size_t>(c)] = s;
    sq_sums[static_cast<std::size_t>(c)] = ss;
  };

  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  const long want = cfg.threads > 0 ? cfg.threads : static_cast<long>(hw);
  const long n_threads = std::clamp(want, 1l, n_chunks);
  if (n_threads == 1) {
    for (long c = 0; c < n_chunks; ++c) run_chunk(c);
  } else {
    std::atomic<long> next{0};
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(n_threads));
    for (long i = 0; i < n_threads; ++i) {
      workers.emplace_back([&]() {
        for (long c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1)) {
          run_chunk(c);
        }
      });
    }
    for (auto& w : workers) w.join();
  }

  double total = 0.0;
  double total_sq = 0.0;
  for (long c = 0; c < n_chunks; ++c) {
    total += sums[static_cast<std::size_t>(c)];
    total_sq += sq_sums[static_cast<std::size_t>(c)];
  }

  Estimate e;
  e.trials = trials;
  e.value = total / static_cast<double>(trials);
  if (trials > 1) {
    const double var =
        std::max(total_sq - total * total / static_cast<double>(trials), 0.0) /
        static_cast<double>(trials - 1);
    e.std_error = std::sqrt(var / static_cast<double>(trials));
  }
  return e;
}

}  // namespace

Estimate estimate_coverage(double threshold, double offset,
                           const NetworkModel& model, const SimConfig& cfg) {
  check_sim_inputs(offset, model, cfg);
  if (!(threshold > 0.0) || !std::isfinite(threshold)) {
    throw std::invalid_argument("SINR threshold must be positive and finite");
  }
  return run_trials(offset, model, cfg, [threshold](double sinr) {
    return sinr > threshold ? 1.0 : 0.0;
  });
}

Estimate estimate_capacity_coverage(double min_rate_bps_hz, double offset,
                                    const NetworkModel& model,
                                    const SimConfig& cfg) {
  check_sim_inputs(offset, model, cfg);
  if (!(min_rate_bps_hz >= 0.0) || !std::isfinite(min_rate_bps_hz)) {
    throw std::invalid_argument("rate target must be non-negative and finite");
  }
  if (min_rate_bps_hz == 0.0) {
    return Estimate{1.0, 0.0, cfg.trials};
  }
  const double threshold = std::exp2(min_rate_bps_hz / model.n_aps) - 1.0;
  return run_trials(offset, model, cfg, [threshold](double sinr) {
    return sinr > threshold ? 1.0 : 0.0;
  });
}

Estimate estimate_ergodic(double offset, const NetworkModel& model,
                          const SimConfig& cfg) {
  check_sim_inputs(offset, model, cfg);
  const double n = model.n_aps;
  return run_trials(offset, model, cfg, [n](double sinr) {
    return n * std::log1p(sinr) / std::numbers::ln2;
  });
}

double ks_statistic_uniform(std::span<const double> sample) {
  if (sample.empty()) {
    throw std::invalid_argument("KS statistic needs a non-empty sample");
  }
  std::vector<double> u(sample.begin(), sample.end());
  std::sort(u.begin(), u.end());
  const double n = static_cast<double>(u.size());
  double d = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max(d, std::max(u[i] - lo, hi - u[i]));
  }
  return d;
}

double ks_critical_value(long n, double alpha) {
  if (n < 1) throw std::invalid_argument("KS critical value needs n >= 1");
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw std::invalid_argument("significance must lie in (0, 1)");
  }
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) /
         std::sqrt(static_cast<double>(n));
}

}  // namespace finitecell
