#include "randsum/volterra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "quadrature.hpp"

namespace randsum {

double SurvivalCurve::at(double t) const {
    if (values.empty()) return 0.0;
    if (t <= t0) return values.front();
    const double x = (t - t0) / h;
    const auto n = static_cast<std::size_t>(x);
    if (n + 1 >= values.size()) return values.back();
    const double w = x - static_cast<double>(n);
    return values[n] + w * (values[n + 1] - values[n]);
}

double SurvivalCurve::cdf(double t) const { return t < 0.0 ? 0.0 : 1.0 - at(t); }

double SurvivalCurve::integral(double floor) const {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        if (values[i] < floor && values[i + 1] < floor) break;
        sum += 0.5 * (values[i] + values[i + 1]) * h;
    }
    return sum;
}

void SurvivalCurve::write_csv(std::ostream& os) const {
    os << "t,survival\n";
    char buf[80];
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.12g,%.12g\n", t0 + h * static_cast<double>(i),
                      values[i]);
        os << buf;
    }
}

SurvivalCurve SurvivalCurve::read_csv(std::istream& is) {
    SurvivalCurve c;
    std::string line;
    std::getline(is, line); // header
    std::vector<double> ts;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw ParseError("survival csv: missing comma in row");
        try {
            ts.push_back(std::stod(line.substr(0, comma)));
            c.values.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw ParseError("survival csv: bad number in row '" + line + "'");
        }
    }
    if (ts.size() < 2) throw ParseError("survival csv: need at least two rows");
    c.t0 = ts.front();
    c.h = ts[1] - ts[0];
    return c;
}

namespace {

struct Kernel {
    std::vector<double> cont;       // continuous mass per cell (t_j, t_{j+1}]
    std::vector<PointMass> atoms;   // exact positions
    double atom_mass_at_zero = 0.0; // atoms snapping to node 0
};

Kernel build_kernel(const JointStepLaw& law, double h, std::size_t cells, bool snap_to_nodes) {
    Kernel k;
    k.cont.resize(cells, 0.0);
    std::vector<std::pair<std::size_t, double>> atom_cells; // cell index of each atom
    for (const PointMass& a : law.sub_atoms0()) {
        if (a.x > h * static_cast<double>(cells) + 0.5 * h) continue;
        k.atoms.push_back(a);
        if (a.x > 0.0) {
            // Atom at x sits in cell (t_j, t_{j+1}] with j = ceil(x/h) - 1;
            // an atom at 0 is outside every cell (F0(0) already carries it).
            const auto cell = static_cast<std::size_t>(
                std::min(std::ceil(a.x / h) - 1.0, static_cast<double>(cells - 1)));
            atom_cells.emplace_back(cell, a.mass);
        }
    }
    const bool have_density = law.sub_density0(0.5 * h).has_value();
    if (have_density) {
        for (std::size_t j = 0; j < cells; ++j) {
            const double a = h * static_cast<double>(j);
            const double b = a + h;
            k.cont[j] = detail::integrate([&](double x) { return *law.sub_density0(x); }, a, b);
        }
    } else {
        double prev = law.sub_cdfs(0.0).f0;
        for (std::size_t j = 0; j < cells; ++j) {
            const double next = law.sub_cdfs(h * static_cast<double>(j + 1)).f0;
            k.cont[j] = std::max(0.0, next - prev);
            prev = next;
        }
        for (const auto& [cell, mass] : atom_cells)
            k.cont[cell] = std::max(0.0, k.cont[cell] - mass);
    }
    if (snap_to_nodes) {
        for (PointMass& a : k.atoms) {
            const auto node = static_cast<std::size_t>(std::llround(a.x / h));
            a.x = h * static_cast<double>(node);
            if (node == 0) k.atom_mass_at_zero += a.mass;
        }
        std::erase_if(k.atoms, [](const PointMass& a) { return a.x == 0.0; });
    } else {
        for (const PointMass& a : k.atoms)
            if (a.x == 0.0) k.atom_mass_at_zero += a.mass;
        std::erase_if(k.atoms, [](const PointMass& a) { return a.x == 0.0; });
    }
    return k;
}

} // namespace

SurvivalCurve solve_survival(const JointStepLaw& law, double t_max, double h) {
    if (!(h > 0.0) || !(t_max >= 10.0 * h))
        throw ValidationError("solve_survival: need h > 0 and t_max >= 10 h");
    const auto n_nodes = static_cast<std::size_t>(std::llround(t_max / h)) + 1;
    const Kernel kernel = build_kernel(law, h, n_nodes - 1, /*snap_to_nodes=*/true);
    if (kernel.atom_mass_at_zero >= 1.0 - 1e-12)
        throw AtomAtZero("kernel has mass " + std::to_string(kernel.atom_mass_at_zero) +
                         " at t = 0");

    // Atom node offsets for the marching sum.
    std::vector<std::pair<std::size_t, double>> atom_nodes;
    for (const PointMass& a : kernel.atoms)
        atom_nodes.emplace_back(static_cast<std::size_t>(std::llround(a.x / h)), a.mass);

    SurvivalCurve curve;
    curve.h = h;
    curve.values.assign(n_nodes, 0.0);
    curve.values[0] = 1.0;

    const double c0 = kernel.cont.empty() ? 0.0 : kernel.cont[0];
    const double denom = 1.0 - kernel.atom_mass_at_zero - 0.5 * c0;
    if (denom <= 1e-12)
        throw AtomAtZero("kernel mass adjacent to t = 0 leaves no solvable diagonal");

    double worst_rise = 0.0;
    std::vector<double>& p = curve.values;
    for (std::size_t n = 1; n < n_nodes; ++n) {
        double rhs = 1.0 - law.sub_cdfs_left(h * static_cast<double>(n)).f;
        rhs += 0.5 * c0 * p[n - 1];
        for (std::size_t j = 1; j < n; ++j)
            rhs += kernel.cont[j] * 0.5 * (p[n - j - 1] + p[n - j]);
        for (const auto& [node, mass] : atom_nodes)
            if (node < n) rhs += mass * p[n - node];
        double v = rhs / denom;
        if (v > p[n - 1]) worst_rise = std::max(worst_rise, v - p[n - 1]);
        p[n] = std::clamp(v, 0.0, p[n - 1]);
    }
    if (worst_rise > 1e-6)
        throw GridTooCoarse("solved curve rises by " + std::to_string(worst_rise) +
                            "; refine the grid");
    return curve;
}

double volterra_residual(const JointStepLaw& law, const SurvivalCurve& curve, int refine,
                         int stride) {
    if (refine < 2 || curve.values.size() < 2) return 0.0;
    const double hf = curve.h / refine;
    const std::size_t fine_cells = (curve.values.size() - 1) * static_cast<std::size_t>(refine);
    const Kernel kernel = build_kernel(law, hf, fine_cells, /*snap_to_nodes=*/false);

    double worst = 0.0;
    for (std::size_t n = static_cast<std::size_t>(stride); n < curve.values.size();
         n += static_cast<std::size_t>(stride)) {
        const double t = curve.h * static_cast<double>(n);
        double rhs = 1.0 - law.sub_cdfs_left(t).f;
        const std::size_t m = n * static_cast<std::size_t>(refine);
        for (std::size_t j = 0; j < m; ++j)
            rhs += kernel.cont[j] * curve.at(t - (static_cast<double>(j) + 0.5) * hf);
        rhs += kernel.atom_mass_at_zero * curve.at(t);
        for (const PointMass& a : kernel.atoms)
            if (a.x < t) rhs += a.mass * curve.at(t - a.x);
        worst = std::max(worst, std::abs(rhs - curve.values[n]));
    }
    return worst;
}

namespace {

// Weights carry large alternating terms; long double keeps the cancellation
// benign through order 22.
std::vector<long double> stehfest_weights(int order) {
    if (order < 2 || order % 2 != 0 || order > 22)
        throw ValidationError("gaver_stehfest: order must be even and within [2, 22]");
    const int half = order / 2;
    auto fact = [](int n) {
        long double f = 1.0L;
        for (int i = 2; i <= n; ++i) f *= i;
        return f;
    };
    std::vector<long double> v(static_cast<std::size_t>(order) + 1, 0.0L);
    for (int k = 1; k <= order; ++k) {
        long double sum = 0.0L;
        for (int j = (k + 1) / 2; j <= std::min(k, half); ++j) {
            sum += std::pow(static_cast<long double>(j), half) * fact(2 * j) /
                   (fact(half - j) * fact(j) * fact(j - 1) * fact(k - j) * fact(2 * j - k));
        }
        v[static_cast<std::size_t>(k)] = ((k + half) % 2 == 0 ? 1.0L : -1.0L) * sum;
    }
    return v;
}

} // namespace

double gaver_stehfest(const std::function<double(double)>& transform, double t, int order) {
    return gaver_stehfest_ld(
        [&transform](long double s) {
            return static_cast<long double>(transform(static_cast<double>(s)));
        },
        t, order);
}

double gaver_stehfest_ld(const std::function<long double(long double)>& transform, double t,
                         int order) {
    if (!(t > 0.0)) throw ValidationError("gaver_stehfest: t must be > 0");
    const std::vector<long double> v = stehfest_weights(order);
    const long double ln2_t = std::log(2.0L) / static_cast<long double>(t);
    long double sum = 0.0L;
    for (int k = 1; k <= order; ++k)
        sum += v[static_cast<std::size_t>(k)] * transform(k * ln2_t);
    return static_cast<double>(ln2_t * sum);
}

std::vector<double> invert_laplace(const LaplaceTransforms& lt, std::span<const double> t_grid,
                                   int order, bool stability_check) {
    auto cdf_transform = [&lt](double z) { return lt.phi(z) / z; };
    std::vector<double> survival;
    survival.reserve(t_grid.size());
    for (double t : t_grid) {
        const double f = gaver_stehfest(cdf_transform, t, order);
        if (stability_check) {
            const double f_lo = gaver_stehfest(cdf_transform, t, order - 2);
            const double f_hi = gaver_stehfest(cdf_transform, t, order + 2);
            if (std::abs(f - f_lo) > 1e-3 || std::abs(f_hi - f) > 1e-3)
                throw InversionUnstable("Stehfest orders disagree at t = " + std::to_string(t) +
                                        " (" + std::to_string(std::abs(f - f_lo)) + ", " +
                                        std::to_string(std::abs(f_hi - f)) + ")");
        }
        survival.push_back(std::clamp(1.0 - f, 0.0, 1.0));
    }
    return survival;
}

SurvivalCurve invert_laplace_curve(const LaplaceTransforms& lt, double t_max, double h, int order,
                                   bool stability_check) {
    if (!(h > 0.0) || !(t_max >= h)) throw ValidationError("invert_laplace_curve: bad grid");
    const auto n_nodes = static_cast<std::size_t>(std::llround(t_max / h)) + 1;
    std::vector<double> grid;
    grid.reserve(n_nodes - 1);
    for (std::size_t j = 1; j < n_nodes; ++j) grid.push_back(h * static_cast<double>(j));
    const std::vector<double> tail = invert_laplace(lt, grid, order, stability_check);
    SurvivalCurve curve;
    curve.h = h;
    curve.values.reserve(n_nodes);
    curve.values.push_back(1.0);
    curve.values.insert(curve.values.end(), tail.begin(), tail.end());
    return curve;
}

} // namespace randsum
