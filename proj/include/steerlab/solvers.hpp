#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "steerlab/criteria.hpp"
#include "steerlab/states.hpp"

namespace steerlab {

/// Thrown when a bisection bracket does not enclose a sign change.
class bracket_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One swept parameter axis: `count` evenly spaced values from start to stop.
struct AxisSpec {
    std::string name;
    double start = 0.0;
    double stop = 0.0;
    int count = 0;
};

/// The axis values, with both endpoints exact.
std::vector<double> axis_values(const AxisSpec& axis);

struct ThresholdResult {
    std::string parameter;
    double critical = 0.0;  // midpoint of the final bracket
    double lower = 0.0;
    double upper = 0.0;
    double tolerance = 0.0;  // achieved bracket width
    int evaluations = 0;
};

/// 17-significant-digit JSON {parameter, critical, bracket, tolerance, evaluations}.
std::string to_json(const ThresholdResult& result);

/// Bisects the sign change of gap_fn on [lo, hi]. Evaluates only inside the
/// bracket and uses at most ceil(log2((hi-lo)/tol)) + 2 evaluations.
ThresholdResult bisect_threshold(const std::function<double(double)>& gap_fn, double lo, double hi,
                                 double tol, const std::string& parameter = "p");

/// Critical imprecision of a state family: bisects xi on the envelope
/// xi -> max over the theta grid of the family's gap. Three-subsystem families
/// use the A->BC criterion, bipartite families the A->B criterion.
ThresholdResult critical_xi(const StateFamily& family, const AxisSpec& theta_grid, double xi_lo,
                            double xi_hi, double tol);

/// Gap reports over a dense (axis1 x axis2) grid, row-major.
struct SweepGrid {
    std::string scenario;
    AxisSpec axis1;
    AxisSpec axis2;
    std::vector<GapReport> reports;
};

/// Evaluates `eval` at every grid point. Parallel over points with results
/// written to pre-assigned slots, so output is schedule-independent.
SweepGrid sweep(const std::string& scenario,
                const std::function<GapReport(double, double)>& eval, const AxisSpec& axis1,
                const AxisSpec& axis2);

/// CSV with header axis1,axis2,lhs,penalty,rhs,gap,steerable (17 sig digits).
void write_sweep_csv(const std::string& path, const SweepGrid& grid);

/// Monte-Carlo check of the expansion-coefficient deviation bound.
struct BoundSample {
    int index = 0;
    double max_dev = 0.0;  // worst coefficient deviation in this sample
};

struct BoundCheck {
    int dim = 0;
    double xi = 0.0;
    std::uint64_t seed = 0;
    double bound = 0.0;  // analytic per-coefficient bound
    double worst = 0.0;  // largest deviation seen across samples
    int violations = 0;
    std::vector<BoundSample> samples;
};

/// Draws `samples` (random state, perturbed complete basis) pairs and compares
/// every coefficient deviation against coeff_bound.
BoundCheck verify_coeff_bound(int dim, double xi, int samples, std::uint64_t seed);

/// CSV with header d,xi,sample,max_coeff_dev,bound.
void write_bound_csv(const std::string& path, const BoundCheck& check);

/// Runs body(i) for i in [0, n), split across threads (capped by the
/// STEERLAB_THREADS environment variable); results must go to per-index slots.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace steerlab
