#include "rydsim/cloud.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "rydsim/errors.hpp"

namespace rydsim {

double CloudGeometry::volume() const {
    if (shape == CloudShape::Box) return extent.x * extent.y * extent.z;
    // Peak-density normalization: N = rho_peak * (2 pi)^{3/2} sx sy sz.
    const double c = std::pow(two_pi, 1.5);
    return c * extent.x * extent.y * extent.z;
}

AtomCloud sample_cloud(const CloudGeometry& geometry, double density, std::size_t n_atoms,
                       std::uint64_t seed) {
    if (!(density > 0.0)) throw ConfigError("sample_cloud: density must be > 0");

    const double volume = geometry.volume();
    std::size_t n = n_atoms != 0 ? n_atoms
                                 : static_cast<std::size_t>(std::llround(density * volume));
    if (n < 1) n = 1;

    const double mean_spacing = std::cbrt(volume / static_cast<double>(n));
    if (mean_spacing < 0.01)
        throw ConfigError("sample_cloud: mean spacing below 0.01 um, density too high");

    AtomCloud cloud;
    cloud.geometry = geometry;
    cloud.rng_seed = seed;
    cloud.positions.reserve(n);
    // If the count was given explicitly, store the density implied by it.
    cloud.peak_density = n_atoms != 0 ? static_cast<double>(n) / volume : density;

    std::mt19937_64 rng(seed);
    if (geometry.shape == CloudShape::Box) {
        std::uniform_real_distribution<double> ux(-0.5 * geometry.extent.x,
                                                  0.5 * geometry.extent.x);
        std::uniform_real_distribution<double> uy(-0.5 * geometry.extent.y,
                                                  0.5 * geometry.extent.y);
        std::uniform_real_distribution<double> uz(-0.5 * geometry.extent.z,
                                                  0.5 * geometry.extent.z);
        for (std::size_t i = 0; i < n; ++i) cloud.positions.push_back({ux(rng), uy(rng), uz(rng)});
    } else {
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (std::size_t i = 0; i < n; ++i)
            cloud.positions.push_back({geometry.extent.x * gauss(rng),
                                       geometry.extent.y * gauss(rng),
                                       geometry.extent.z * gauss(rng)});
    }
    return cloud;
}

double CouplingMatrix::row_sum(std::size_t i) const {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += j[i * n + k];
    return s;
}

double CouplingMatrix::mean_chi() const {
    if (n == 0) return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += row_sum(i);
    return -0.5 * total / static_cast<double>(n);
}

void CouplingMatrix::check_invariants() const {
    int sign = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (j[i * n + i] != 0.0) throw NumericalError("coupling matrix: nonzero diagonal");
        for (std::size_t k = i + 1; k < n; ++k) {
            const double a = j[i * n + k], b = j[k * n + i];
            if (a != b) throw NumericalError("coupling matrix: asymmetric");
            if (a != 0.0) {
                const int s = a > 0.0 ? 1 : -1;
                if (sign == 0) sign = s;
                if (s != sign) throw NumericalError("coupling matrix: mixed coupling signs");
            }
        }
    }
}

namespace {

double min_image_distance(const Vec3& a, const Vec3& b, const Vec3& box) {
    auto wrap = [](double d, double l) {
        d = std::remainder(d, l);
        return d;
    };
    const double dx = wrap(a.x - b.x, box.x);
    const double dy = wrap(a.y - b.y, box.y);
    const double dz = wrap(a.z - b.z, box.z);
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

} // namespace

CouplingMatrix coupling_matrix(const AtomCloud& cloud, const BeamProfile& beam,
                               const DressingParams& params, const CouplingOptions& options) {
    const std::size_t n = cloud.size();
    CouplingMatrix m;
    m.n = n;
    m.j.assign(n * n, 0.0);
    m.light_shift.assign(n, 0.0);

    const double base_rabi = beam.peak_rabi > 0.0 ? beam.peak_rabi : params.rabi;
    BeamProfile b = beam;
    b.peak_rabi = base_rabi;

    std::vector<double> rabi(n);
    for (std::size_t i = 0; i < n; ++i) {
        rabi[i] = b.local_rabi(cloud.positions[i].x);
        m.light_shift[i] = rabi[i] * rabi[i] / (4.0 * params.detuning);
    }

    const bool periodic = options.mode == CouplingMode::PeriodicBulk;
    if (periodic && cloud.geometry.shape != CloudShape::Box)
        throw ConfigError("coupling_matrix: PeriodicBulk mode requires box geometry");

    const Vec3 box = cloud.geometry.extent;
    const double r_cut =
        periodic ? 0.5 * std::min({box.x, box.y, box.z}) : 0.0;

    // Uniform tail compensation: every atom deep in a bulk cloud also sees
    // the integrated coupling beyond the minimum-image cutoff. Spreading
    // rho * I_tail evenly over the other N-1 partners reproduces that mean
    // field without breaking the pair-matrix abstraction.
    double j_tail_pair = 0.0;
    if (periodic && n > 1) {
        const PairPotentialFn soft = [&](double r, double theta) {
            return dressed_interaction_softcore(r, theta, params);
        };
        const double tail = potential_tail_integral(soft, r_cut);
        j_tail_pair = cloud.peak_density * tail / static_cast<double>(n - 1);
    }

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = i + 1; k < n; ++k) {
            const double r = periodic
                                 ? min_image_distance(cloud.positions[i], cloud.positions[k], box)
                                 : distance(cloud.positions[i], cloud.positions[k]);
            if (r < options.min_distance)
                throw ConfigError("coupling_matrix: coincident atoms (r < " +
                                  std::to_string(options.min_distance) + " um)");

            const Vec3 d = cloud.positions[i] - cloud.positions[k];
            const double theta = std::acos(std::clamp(d.z / std::max(d.norm(), 1e-300),
                                                      -1.0, 1.0));

            DressingParams local = params;
            local.rabi = std::sqrt(rabi[i] * rabi[k]);
            double jik = local.rabi > 0.0 ? dressed_interaction_softcore(r, theta, local)
                                          : 0.0;
            jik += j_tail_pair;
            jik *= options.chi_calibration;
            m.at(i, k) = jik;
            m.at(k, i) = jik;
        }
    }
    m.check_invariants();
    return m;
}

double potential_tail_integral(const PairPotentialFn& potential, double r_cut) {
    // Fit a local power law J ~ A r^-p near the cutoff; the soft-core tail
    // has p = 6. Refuse exponents too close to the convergence boundary.
    const double j1 = potential(r_cut, 0.0);
    const double j2 = potential(2.0 * r_cut, 0.0);
    if (j1 == 0.0) return 0.0;
    if (j2 == 0.0) return 0.0; // compact support, nothing beyond
    const double p = std::log(std::abs(j1 / j2)) / std::log(2.0);
    if (p < 3.2)
        throw IntegrationError("potential tail decays as r^-" + std::to_string(p) +
                               ", slower than r^-3.2: integral not convergent");
    // int_{r_cut}^inf 4 pi r^2 A r^-p dr = 4 pi J(r_cut) r_cut^3 / (p - 3)
    return 4.0 * std::numbers::pi * j1 * r_cut * r_cut * r_cut / (p - 3.0);
}

namespace {

// Composite Simpson on [a, b] with an even number of panels.
double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
    if (panels % 2 != 0) ++panels;
    const double h = (b - a) / panels;
    double s = f(a) + f(b);
    for (int i = 1; i < panels; ++i) s += f(a + i * h) * (i % 2 == 0 ? 2.0 : 4.0);
    return s * h / 3.0;
}

// 16-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr int kGaussN = 16;
constexpr double kGaussX[kGaussN] = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318, -0.7554044083550030,
    -0.6178762444026438, -0.4580167776572274, -0.2816035507792589, -0.0950125098376374,
    0.0950125098376374,  0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
    0.7554044083550030,  0.8656312023878318,  0.9445750230732326,  0.9894009349916499};
constexpr double kGaussW[kGaussN] = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928, 0.1246289712555339,
    0.1495959888165767, 0.1691565193950025, 0.1826034150449236, 0.1894506104550685,
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

} // namespace

MeanFieldChi meanfield_chi(double density, const PairPotentialFn& potential,
                           const ChiIntegrationOptions& options) {
    if (!(density > 0.0)) throw ConfigError("meanfield_chi: density must be > 0");

    const double r_max = options.r_max > 0.0 ? options.r_max : 8.0 * options.r_scale;

    // Solid-angle average of J at radius r (trivial when isotropic).
    auto angular_mean = [&](double r) {
        if (!options.angular) return potential(r, 0.0);
        double s = 0.0;
        for (int i = 0; i < kGaussN; ++i) {
            const double cos_t = kGaussX[i];
            s += kGaussW[i] * potential(r, std::acos(cos_t));
        }
        return 0.5 * s;
    };

    auto radial_integrand = [&](double r) {
        if (r <= 0.0) return 0.0;
        return 4.0 * std::numbers::pi * r * r * angular_mean(r);
    };

    MeanFieldChi result;

    // Quadrature route: Simpson in two panels (core is steep, tail smooth)
    // plus the analytic power-law tail beyond r_max.
    const double core = simpson(radial_integrand, 0.0, 2.0 * options.r_scale, 2000);
    const double outer = simpson(radial_integrand, 2.0 * options.r_scale, r_max, 2000);
    const double tail = potential_tail_integral(
        [&](double r, double) { return angular_mean(r); }, r_max);
    result.integral = core + outer + tail;
    result.tail_fraction = std::abs(result.integral) > 0.0
                               ? std::abs(tail / result.integral)
                               : 0.0;
    if (result.tail_fraction > options.max_tail_fraction)
        throw IntegrationError("meanfield_chi: tail beyond r_max contributes " +
                               std::to_string(100.0 * result.tail_fraction) +
                               "% of the integral; increase r_max or fix the potential");
    result.quadrature = -0.5 * density * result.integral;

    // Monte Carlo route over sampled pair separations: radius stratified
    // over equal shells of [0, r_max], direction uniform on the sphere.
    std::mt19937_64 rng(options.mc_seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const std::size_t strata = 1000;
    const std::size_t per_stratum = std::max<std::size_t>(1, options.mc_samples / strata);
    const double dr = r_max / static_cast<double>(strata);
    double mc = 0.0;
    for (std::size_t s = 0; s < strata; ++s) {
        double acc = 0.0;
        for (std::size_t k = 0; k < per_stratum; ++k) {
            const double r = (static_cast<double>(s) + uni(rng)) * dr;
            const double cos_t = 2.0 * uni(rng) - 1.0;
            const double j = options.angular ? potential(r, std::acos(cos_t))
                                             : potential(r, 0.0);
            acc += 4.0 * std::numbers::pi * r * r * j;
        }
        mc += dr * acc / static_cast<double>(per_stratum);
    }
    result.monte_carlo = -0.5 * density * (mc + tail);

    return result;
}

MeanFieldChi meanfield_chi(double density, const DressingParams& params,
                           ChiIntegrationOptions options) {
    if (options.r_scale <= 0.0) options.r_scale = interaction_range(params);
    options.angular = static_cast<bool>(params.angular_factor);
    return meanfield_chi(
        density,
        [&params](double r, double theta) {
            return dressed_interaction_softcore(r, theta, params);
        },
        options);
}

double interaction_sphere_count(double density, double r_c) {
    if (!(density > 0.0) || !(r_c >= 0.0))
        throw std::domain_error("interaction_sphere_count: rho > 0 and r_c >= 0 required");
    return density * (4.0 / 3.0) * std::numbers::pi * r_c * r_c * r_c;
}

std::string cloud_to_text(const AtomCloud& cloud, const BeamProfile& beam) {
    std::ostringstream os;
    os.precision(12);
    os << "# id\tx_um\ty_um\tz_um\trabi_rad_per_us\n";
    os << "# density_per_um3 " << cloud.peak_density << " seed " << cloud.rng_seed << "\n";
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const Vec3& p = cloud.positions[i];
        os << i << '\t' << p.x << '\t' << p.y << '\t' << p.z << '\t'
           << beam.local_rabi(p.x) << '\n';
    }
    return os.str();
}

AtomCloud cloud_from_text(const std::string& text) {
    AtomCloud cloud;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream hs(line);
            std::string hash, key;
            hs >> hash >> key;
            if (key == "density_per_um3") {
                std::string seed_key;
                hs >> cloud.peak_density >> seed_key >> cloud.rng_seed;
            }
            continue;
        }
        std::istringstream ls(line);
        std::size_t id;
        Vec3 p;
        double rabi;
        if (!(ls >> id >> p.x >> p.y >> p.z >> rabi))
            throw ConfigError("cloud_from_text: malformed record: " + line);
        cloud.positions.push_back(p);
    }
    if (cloud.positions.empty()) throw ConfigError("cloud_from_text: no atoms");
    return cloud;
}

} // namespace rydsim
