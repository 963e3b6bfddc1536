#include "steerlab/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numeric>
#include <thread>

#include "steerlab/observables.hpp"
#include "steerlab/random.hpp"

namespace steerlab {

std::vector<double> axis_values(const AxisSpec& axis) {
    if (axis.count < 1)
        throw std::invalid_argument("axis '" + axis.name + "': count must be >= 1");
    std::vector<double> v(static_cast<std::size_t>(axis.count));
    if (axis.count == 1) {
        v[0] = axis.start;
        return v;
    }
    const double step = (axis.stop - axis.start) / (axis.count - 1);
    for (int i = 0; i < axis.count; ++i)
        v[static_cast<std::size_t>(i)] = i == axis.count - 1 ? axis.stop : axis.start + i * step;
    return v;
}

std::string to_json(const ThresholdResult& r) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "{\"parameter\":\"%s\",\"critical\":%.17g,\"bracket\":[%.17g,%.17g],"
                  "\"tolerance\":%.17g,\"evaluations\":%d}",
                  r.parameter.c_str(), r.critical, r.lower, r.upper, r.tolerance, r.evaluations);
    return buf;
}

ThresholdResult bisect_threshold(const std::function<double(double)>& gap_fn, double lo, double hi,
                                 double tol, const std::string& parameter) {
    if (!(tol > 0.0)) throw std::invalid_argument("bisect_threshold: tol must be positive");
    if (!(lo < hi)) throw std::invalid_argument("bisect_threshold: need lo < hi");
    int evaluations = 0;
    auto eval = [&](double x) {
        ++evaluations;
        return gap_fn(x);
    };
    const bool hi_positive = eval(hi) > 0.0;
    if ((eval(lo) > 0.0) == hi_positive)
        throw bracket_error("bisect_threshold: gap has the same sign at both bracket endpoints");
    while (hi - lo > tol) {
        const double mid = std::midpoint(lo, hi);
        if (!(lo < mid && mid < hi)) break;  // bracket exhausted at floating-point resolution
        ((eval(mid) > 0.0) == hi_positive ? hi : lo) = mid;
    }
    ThresholdResult out;
    out.parameter = parameter;
    out.critical = std::midpoint(lo, hi);
    out.lower = lo;
    out.upper = hi;
    out.tolerance = hi - lo;
    out.evaluations = evaluations;
    return out;
}

ThresholdResult critical_xi(const StateFamily& family, const AxisSpec& theta_grid, double xi_lo,
                            double xi_hi, double tol) {
    if (theta_grid.count < 2)
        throw std::invalid_argument("critical_xi: theta grid needs at least 2 points");
    const std::vector<double> thetas = axis_values(theta_grid);

    // build all grid states once; only the error model changes along the bisection
    std::vector<DensityMatrix> states;
    states.reserve(thetas.size());
    for (double theta : thetas) {
        StateFamily at = family;
        at.theta = theta;
        states.push_back(make_state(at));
    }
    const int parts = states.front().dims().size();
    const int d = states.front().dims()[parts - 1];
    const ObservableBasis local = gell_mann_loo(d);

    auto envelope = [&](double xi) {
        const ErrorModel model{xi, d};
        double best = -std::numeric_limits<double>::infinity();
        for (const DensityMatrix& rho : states) {
            const GapReport r = parts == 3 ? tripartite_gap_a_to_bc(rho, model)
                                           : bipartite_gap_imprecise(rho, local, local, model);
            best = std::max(best, r.gap);
        }
        return best;
    };
    ThresholdResult out = bisect_threshold(envelope, xi_lo, xi_hi, tol, "xi");
    return out;
}

SweepGrid sweep(const std::string& scenario, const std::function<GapReport(double, double)>& eval,
                const AxisSpec& axis1, const AxisSpec& axis2) {
    for (const AxisSpec* axis : {&axis1, &axis2}) {
        if (axis->count < 2)
            throw std::invalid_argument("sweep: axis '" + axis->name + "' needs count >= 2");
        if (!(axis->start < axis->stop))
            throw std::invalid_argument("sweep: axis '" + axis->name + "' needs start < stop");
    }
    const std::vector<double> v1 = axis_values(axis1);
    const std::vector<double> v2 = axis_values(axis2);
    SweepGrid out;
    out.scenario = scenario;
    out.axis1 = axis1;
    out.axis2 = axis2;
    out.reports.resize(v1.size() * v2.size());
    const int n2 = static_cast<int>(v2.size());
    parallel_for(static_cast<int>(out.reports.size()), [&](int idx) {
        out.reports[static_cast<std::size_t>(idx)] =
            eval(v1[static_cast<std::size_t>(idx / n2)], v2[static_cast<std::size_t>(idx % n2)]);
    });
    return out;
}

void write_sweep_csv(const std::string& path, const SweepGrid& grid) {
    std::ofstream file(path);
    if (!file) throw std::runtime_error("write_sweep_csv: cannot open " + path);
    file << "axis1,axis2,lhs,penalty,rhs,gap,steerable\n";
    const std::vector<double> v1 = axis_values(grid.axis1);
    const std::vector<double> v2 = axis_values(grid.axis2);
    char line[512];
    for (std::size_t i = 0; i < v1.size(); ++i)
        for (std::size_t j = 0; j < v2.size(); ++j) {
            const GapReport& r = grid.reports[i * v2.size() + j];
            std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", v1[i],
                          v2[j], r.lhs, r.penalty, r.rhs, r.gap, r.steerable ? 1 : 0);
            file << line;
        }
    if (!file) throw std::runtime_error("write_sweep_csv: write failed for " + path);
}

BoundCheck verify_coeff_bound(int dim, double xi, int samples, std::uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("verify_coeff_bound: samples must be >= 1");
    const ObservableBasis basis = gell_mann_loo(dim);
    const ErrorModel model{xi, dim};
    BoundCheck out;
    out.dim = dim;
    out.xi = xi;
    out.seed = seed;
    out.bound = coeff_bound(model);
    out.samples.resize(static_cast<std::size_t>(samples));
    parallel_for(samples, [&](int k) {
        // two decorrelated streams per sample: one for the state, one for the basis
        const DensityMatrix rho =
            random_density_matrix(dim, derive_seed(seed, 2 * static_cast<std::uint64_t>(k)));
        const PerturbedBasis perturbed =
            perturb_basis(basis, model, derive_seed(seed, 2 * static_cast<std::uint64_t>(k) + 1));
        const std::vector<double> target = tomography_coeffs(rho, basis.ops);
        const std::vector<double> implemented = tomography_coeffs(rho, perturbed.implemented);
        double worst = 0.0;
        for (std::size_t i = 0; i < target.size(); ++i)
            worst = std::max(worst, std::abs(target[i] - implemented[i]));
        out.samples[static_cast<std::size_t>(k)] = BoundSample{k, worst};
    });
    for (const BoundSample& s : out.samples) {
        out.worst = std::max(out.worst, s.max_dev);
        if (s.max_dev > out.bound) ++out.violations;
    }
    return out;
}

void write_bound_csv(const std::string& path, const BoundCheck& check) {
    std::ofstream file(path);
    if (!file) throw std::runtime_error("write_bound_csv: cannot open " + path);
    file << "d,xi,sample,max_coeff_dev,bound\n";
    char line[256];
    for (const BoundSample& s : check.samples) {
        std::snprintf(line, sizeof line, "%d,%.17g,%d,%.17g,%.17g\n", check.dim, check.xi, s.index,
                      s.max_dev, check.bound);
        file << line;
    }
    if (!file) throw std::runtime_error("write_bound_csv: write failed for " + path);
}

namespace {

int thread_budget() {
    if (const char* env = std::getenv("STEERLAB_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

}  // namespace

void parallel_for(int n, const std::function<void(int)>& body) {
    if (n <= 0) return;
    const int threads = std::min(n, thread_budget());
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    // contiguous static chunks: the work split is a pure function of (n, threads)
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    const int chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const int begin = t * chunk;
        const int end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&body, begin, end] {
            for (int i = begin; i < end; ++i) body(i);
        });
    }
    for (std::thread& th : pool) th.join();
}

}  // namespace steerlab
