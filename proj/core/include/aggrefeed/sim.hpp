#ifndef AGGREFEED_SIM_HPP
#define AGGREFEED_SIM_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aggrefeed/controller.hpp"

namespace aggrefeed {

enum class IntegratorKind { rk45, rk4 };

/// Piecewise-constant plant disturbance: each component redrawn uniformly
/// from [-amplitude, amplitude] every hold_period seconds, added to x_dot
/// only.
struct DisturbanceSpec {
  double amplitude = 0.0;
  double hold_period = 0.1;
};

struct SimConfig {
  Gains gains;
  double horizon = 0.0;
  IntegratorKind integrator = IntegratorKind::rk45;
  double rel_tol = 1e-6;
  double abs_tol = 1e-8;
  double step_size = 1e-3;  // fixed-step mode
  double sample_period = 0.1;
  std::uint64_t seed = 0;
  std::optional<DisturbanceSpec> disturbance;

  void validate() const;
};

/// Thrown on step-size underflow or a non-finite state; carries the
/// simulation time of the failure.
class SimError : public std::runtime_error {
 public:
  SimError(const std::string& what, double t) : std::runtime_error(what), time(t) {}
  double time;
};

struct TrajectoryLog {
  std::vector<double> times;
  std::vector<NetworkState> states;
  std::vector<Metrics> metrics;
  std::vector<std::array<double, 2>> conservation;  // ||1^T w||, ||1^T z||

  /// Extra columns (name, one value per sample) appended after the standard
  /// ones; used for the analysis monitor series.
  using ExtraColumns = std::vector<std::pair<std::string, std::vector<double>>>;
  void write_csv(std::ostream& out, const ExtraColumns& extra = {}) const;
};

/// Parse a CSV with one header row into named columns (used by `plot` to
/// re-render figures from a trajectory file).
void read_csv_columns(std::istream& in, std::vector<std::string>& names,
                      std::vector<std::vector<double>>& columns);

/// Integrate the closed loop over [0, horizon], sampling every
/// sample_period via dense output. Deterministic given (config, model).
TrajectoryLog integrate(const NetworkModel& model, const NetworkState& initial,
                        const SimConfig& config);

/// Idealized centralized gradient flow u_dot = -grad_reduced(u), used as a
/// reference trajectory.
struct CentralizedLog {
  std::vector<double> times;
  std::vector<VectorXd> inputs;
  std::vector<double> costs;  // F_{sigma,h}(u)
};

CentralizedLog run_centralized_oracle(const NetworkModel& model, const VectorXd& u0,
                                      const SimConfig& config);

/// Generic ODE driver shared by the simulators. Samples are emitted on the
/// uniform grid k * sample_period (dense output in adaptive mode).
using OdeRhs = std::function<VectorXd(double, const VectorXd&)>;
using SampleSink = std::function<void(double, const VectorXd&)>;

struct OdeOptions {
  IntegratorKind kind = IntegratorKind::rk45;
  double rel_tol = 1e-6;
  double abs_tol = 1e-8;
  double step_size = 1e-3;
};

void integrate_ode(const OdeRhs& rhs, const VectorXd& y0, double t0, double t1,
                   const OdeOptions& options, double sample_period, const SampleSink& sink);

}  // namespace aggrefeed

#endif
