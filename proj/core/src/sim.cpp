#include "aggrefeed/sim.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace aggrefeed {

void SimConfig::validate() const {
  gains.validate();
  if (!(horizon > 0.0)) throw ValidationError("horizon must be positive");
  if (!(sample_period > 0.0) || sample_period > horizon) {
    throw ValidationError("sample_period must lie in (0, horizon]");
  }
  if (integrator == IntegratorKind::rk45) {
    if (!(rel_tol > 0.0 && rel_tol < 1.0) || !(abs_tol > 0.0 && abs_tol < 1.0)) {
      throw ValidationError("tolerances must lie in (0, 1)");
    }
  } else if (!(step_size > 0.0)) {
    throw ValidationError("step_size must be positive");
  }
  if (disturbance) {
    if (disturbance->amplitude < 0.0) throw ValidationError("disturbance amplitude must be >= 0");
    if (!(disturbance->hold_period > 0.0)) throw ValidationError("hold_period must be positive");
  }
}

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187, kA53 = 64448.0 / 6561,
                 kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33, kA63 = 46732.0 / 5247,
                 kA64 = 49.0 / 176, kA65 = -5103.0 / 18656;
constexpr double kA71 = 35.0 / 384, kA73 = 500.0 / 1113, kA74 = 125.0 / 192,
                 kA75 = -2187.0 / 6784, kA76 = 11.0 / 84;
constexpr double kE1 = 71.0 / 57600, kE3 = -71.0 / 16695, kE4 = 71.0 / 1920,
                 kE5 = -17253.0 / 339200, kE6 = 22.0 / 525, kE7 = -1.0 / 40;
// Dense-output coefficients (4th-order continuous extension).
constexpr double kD1 = -12715105075.0 / 11282082432.0;
constexpr double kD3 = 87487479700.0 / 32700410799.0;
constexpr double kD4 = -10690763975.0 / 1880347072.0;
constexpr double kD5 = 701980252875.0 / 199316789632.0;
constexpr double kD6 = -1453857185.0 / 822651844.0;
constexpr double kD7 = 69997945.0 / 29380423.0;

void check_finite(const VectorXd& y, double t) {
  for (int i = 0; i < y.size(); ++i) {
    if (!std::isfinite(y(i))) {
      std::ostringstream msg;
      msg << "non-finite state component " << i << " at t = " << t;
      throw SimError(msg.str(), t);
    }
  }
}

void run_dopri5(const OdeRhs& rhs, VectorXd y, double t0, double t1, double rel_tol,
                double abs_tol, double sample_period, const SampleSink& sink) {
  const int n = static_cast<int>(y.size());
  double t = t0;
  VectorXd k1 = rhs(t, y);
  double h = std::min(sample_period, (t1 - t0) / 100.0);

  sink(t0, y);
  long next_sample = 1;
  const double grid_eps = 1e-9 * sample_period;

  VectorXd k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), y_new(n), y_tmp(n), err(n);
  const double t_end = t1 - 1e-12 * (1.0 + std::abs(t1));
  while (t < t_end) {
    h = std::min(h, t1 - t);
    if (h < 1e-14 * (1.0 + std::abs(t))) {
      throw SimError("step-size underflow", t);
    }

    y_tmp = y + h * kA21 * k1;
    k2 = rhs(t + h / 5.0, y_tmp);
    y_tmp = y + h * (kA31 * k1 + kA32 * k2);
    k3 = rhs(t + 3.0 * h / 10.0, y_tmp);
    y_tmp = y + h * (kA41 * k1 + kA42 * k2 + kA43 * k3);
    k4 = rhs(t + 4.0 * h / 5.0, y_tmp);
    y_tmp = y + h * (kA51 * k1 + kA52 * k2 + kA53 * k3 + kA54 * k4);
    k5 = rhs(t + 8.0 * h / 9.0, y_tmp);
    y_tmp = y + h * (kA61 * k1 + kA62 * k2 + kA63 * k3 + kA64 * k4 + kA65 * k5);
    k6 = rhs(t + h, y_tmp);
    y_new = y + h * (kA71 * k1 + kA73 * k3 + kA74 * k4 + kA75 * k5 + kA76 * k6);
    k7 = rhs(t + h, y_new);

    err = h * (kE1 * k1 + kE3 * k3 + kE4 * k4 + kE5 * k5 + kE6 * k6 + kE7 * k7);
    double err_norm = 0.0;
    for (int i = 0; i < n; ++i) {
      const double scale = abs_tol + rel_tol * std::max(std::abs(y(i)), std::abs(y_new(i)));
      const double e = err(i) / scale;
      err_norm += e * e;
    }
    err_norm = std::sqrt(err_norm / n);

    if (!std::isfinite(err_norm)) {
      check_finite(y_new, t + h);  // pinpoints the offending component
      h *= 0.25;
      continue;
    }
    if (err_norm > 1.0) {
      h *= std::max(0.2, 0.9 * std::pow(err_norm, -0.2));
      continue;
    }

    // Accepted: emit dense-output samples inside (t, t + h].
    const VectorXd dy = y_new - y;
    const VectorXd r3 = h * k1 - dy;
    const VectorXd r4 = dy - h * k7 - r3;
    const VectorXd r5 =
        h * (kD1 * k1 + kD3 * k3 + kD4 * k4 + kD5 * k5 + kD6 * k6 + kD7 * k7);
    while (true) {
      const double ts = next_sample * sample_period;
      if (ts > t + h + grid_eps || ts > t1 + grid_eps) break;
      const double s = (ts - t) / h;
      const double s1 = 1.0 - s;
      const VectorXd ys = y + s * (dy + s1 * (r3 + s * (r4 + s1 * r5)));
      sink(std::min(ts, t1), ys);
      ++next_sample;
    }

    t += h;
    y = y_new;
    k1 = k7;  // first-same-as-last
    check_finite(y, t);
    h *= std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err_norm, 1e-10), -0.2)));
  }
}

void run_rk4(const OdeRhs& rhs, VectorXd y, double t0, double t1, double step,
             double sample_period, const SampleSink& sink) {
  double t = t0;
  sink(t0, y);
  long next_sample = 1;
  const double grid_eps = 1e-9 * sample_period;
  while (t < t1 - 1e-14 * (1.0 + std::abs(t1))) {
    double h = std::min(step, t1 - t);
    // Land exactly on the next sample instant so the grid is config-stable.
    const double ts = next_sample * sample_period;
    if (ts <= t1 + grid_eps && t + h > ts - grid_eps) h = ts - t;
    if (h <= 0.0) {
      sink(ts, y);
      ++next_sample;
      continue;
    }

    const VectorXd k1 = rhs(t, y);
    const VectorXd k2 = rhs(t + h / 2, y + (h / 2) * k1);
    const VectorXd k3 = rhs(t + h / 2, y + (h / 2) * k2);
    const VectorXd k4 = rhs(t + h, y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
    check_finite(y, t);
    if (ts <= t1 + grid_eps && std::abs(t - ts) <= grid_eps) {
      sink(ts, y);
      ++next_sample;
    }
  }
}

// Seeded sample-and-hold draw sequence; value on [k h, (k+1) h) depends only
// on k, so the adaptive integrator sees a deterministic forcing.
class HoldSequence {
 public:
  HoldSequence(const DisturbanceSpec& spec, int dim, std::uint64_t seed)
      : spec_(spec), dim_(dim), rng_(seed) {}

  const VectorXd& at(double t) {
    const auto k = static_cast<std::size_t>(std::max(0.0, t / spec_.hold_period));
    while (draws_.size() <= k) {
      VectorXd d(dim_);
      std::uniform_real_distribution<double> unif(-spec_.amplitude, spec_.amplitude);
      for (int i = 0; i < dim_; ++i) d(i) = spec_.amplitude > 0.0 ? unif(rng_) : 0.0;
      draws_.push_back(std::move(d));
    }
    return draws_[k];
  }

 private:
  DisturbanceSpec spec_;
  int dim_;
  std::mt19937_64 rng_;
  std::vector<VectorXd> draws_;
};

VectorXd pack(const NetworkState& s) {
  VectorXd y(s.x.size() + s.u.size() + s.w.size() + s.z.size());
  y << s.x, s.u, s.w, s.z;
  return y;
}

NetworkState unpack(const NetworkModel& model, const VectorXd& y) {
  NetworkState s;
  const int n = model.state_size(), m = model.input_size();
  const int nd = model.n_agents() * model.agg_dim;
  s.x = y.segment(0, n);
  s.u = y.segment(n, m);
  s.w = y.segment(n + m, nd);
  s.z = y.segment(n + m + nd, nd);
  return s;
}

std::array<double, 2> conservation_of(const NetworkModel& model, const NetworkState& s) {
  const int d = model.agg_dim;
  VectorXd sum_w = VectorXd::Zero(d), sum_z = VectorXd::Zero(d);
  for (int i = 0; i < model.n_agents(); ++i) {
    sum_w += s.w.segment(i * d, d);
    sum_z += s.z.segment(i * d, d);
  }
  return {sum_w.norm(), sum_z.norm()};
}

OdeOptions options_of(const SimConfig& config) {
  OdeOptions opts;
  opts.kind = config.integrator;
  opts.rel_tol = config.rel_tol;
  opts.abs_tol = config.abs_tol;
  opts.step_size = config.step_size;
  return opts;
}

}  // namespace

void integrate_ode(const OdeRhs& rhs, const VectorXd& y0, double t0, double t1,
                   const OdeOptions& options, double sample_period, const SampleSink& sink) {
  if (options.kind == IntegratorKind::rk45) {
    run_dopri5(rhs, y0, t0, t1, options.rel_tol, options.abs_tol, sample_period, sink);
  } else {
    run_rk4(rhs, y0, t0, t1, options.step_size, sample_period, sink);
  }
}

TrajectoryLog integrate(const NetworkModel& model, const NetworkState& initial,
                        const SimConfig& config) {
  config.validate();
  model.validate();
  const auto initial_cons = conservation_of(model, initial);
  if (initial_cons[0] > 1e-12 || initial_cons[1] > 1e-12) {
    std::fputs(
        "warning: w(0) or z(0) not zero-sum; convergence guarantees assume "
        "w(0) = z(0) = 0\n",
        stderr);
  }

  std::optional<HoldSequence> disturbance;
  if (config.disturbance) {
    disturbance.emplace(*config.disturbance, model.state_size(), config.seed);
  }

  OdeRhs rhs = [&](double t, const VectorXd& y) {
    NetworkState s = unpack(model, y);
    NetworkState d = network_rhs(model, s, config.gains);
    if (disturbance) d.x += disturbance->at(t);
    return pack(d);
  };

  TrajectoryLog log;
  integrate_ode(rhs, pack(initial), 0.0, config.horizon, options_of(config),
                config.sample_period, [&](double t, const VectorXd& y) {
                  NetworkState s = unpack(model, y);
                  log.times.push_back(t);
                  log.metrics.push_back(metrics(model, s));
                  log.conservation.push_back(conservation_of(model, s));
                  log.states.push_back(std::move(s));
                });
  return log;
}

CentralizedLog run_centralized_oracle(const NetworkModel& model, const VectorXd& u0,
                                      const SimConfig& config) {
  config.validate();
  model.validate();
  OdeRhs rhs = [&](double, const VectorXd& u) { return VectorXd(-grad_reduced(model, u)); };
  CentralizedLog log;
  integrate_ode(rhs, u0, 0.0, config.horizon, options_of(config), config.sample_period,
                [&](double t, const VectorXd& u) {
                  log.times.push_back(t);
                  log.inputs.push_back(u);
                  const VectorXd hx = stacked_steady_state(model, u);
                  log.costs.push_back(total_cost(model, hx));
                });
  return log;
}

namespace {

void put(std::ostream& out, double v, bool lead_comma = true) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  if (lead_comma) out << ',';
  out << buf;
}

}  // namespace

void TrajectoryLog::write_csv(std::ostream& out, const ExtraColumns& extra) const {
  if (states.empty()) return;
  const auto& first = states.front();
  out << "t";
  for (int i = 0; i < first.x.size(); ++i) out << ",x_" << i;
  for (int i = 0; i < first.u.size(); ++i) out << ",u_" << i;
  for (int i = 0; i < first.w.size(); ++i) out << ",w_" << i;
  for (int i = 0; i < first.z.size(); ++i) out << ",z_" << i;
  out << ",e_opt,e_wz,cost,stationarity,cons_w,cons_z";
  for (const auto& [name, values] : extra) {
    if (values.size() != times.size()) {
      throw ValidationError("extra column '" + name + "' has wrong length");
    }
    out << ',' << name;
  }
  out << "\n";
  for (std::size_t k = 0; k < times.size(); ++k) {
    put(out, times[k], false);
    const auto& s = states[k];
    for (int i = 0; i < s.x.size(); ++i) put(out, s.x(i));
    for (int i = 0; i < s.u.size(); ++i) put(out, s.u(i));
    for (int i = 0; i < s.w.size(); ++i) put(out, s.w(i));
    for (int i = 0; i < s.z.size(); ++i) put(out, s.z(i));
    put(out, metrics[k].e_opt);
    put(out, metrics[k].e_wz);
    put(out, metrics[k].cost);
    put(out, metrics[k].stationarity);
    put(out, conservation[k][0]);
    put(out, conservation[k][1]);
    for (const auto& [name, values] : extra) put(out, values[k]);
    out << "\n";
  }
}

void read_csv_columns(std::istream& in, std::vector<std::string>& names,
                      std::vector<std::vector<double>>& columns) {
  names.clear();
  columns.clear();
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty CSV");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) names.push_back(cell);
  }
  columns.resize(names.size());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t col = 0;
    while (std::getline(ss, cell, ',')) {
      if (col >= columns.size()) throw ValidationError("CSV row wider than header");
      columns[col++].push_back(std::stod(cell));
    }
    if (col != columns.size()) throw ValidationError("CSV row narrower than header");
  }
}

}  // namespace aggrefeed
