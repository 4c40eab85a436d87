#include "dicke/phasespace.hpp"

#include "dicke/parallel.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dicke {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

HusimiGrid make_grid(const GridSpec& spec) {
    if (spec.n_theta < 2 || spec.n_phi < 1) throw std::invalid_argument("GridSpec: need n_theta >= 2, n_phi >= 1");
    HusimiGrid g;
    g.theta.resize(spec.n_theta);
    g.phi.resize(spec.n_phi);
    for (int i = 0; i < spec.n_theta; ++i) g.theta[i] = M_PI * i / (spec.n_theta - 1);
    for (int k = 0; k < spec.n_phi; ++k) g.phi[k] = 2.0 * M_PI * k / spec.n_phi;
    g.values.assign(static_cast<std::size_t>(spec.n_theta) * spec.n_phi, 0.0);
    return g;
}

// modulus of the spin coherent amplitudes at fixed theta (phi enters as a phase only)
std::vector<double> spin_amp_moduli(double j, double theta) {
    const std::vector<Complex> a = spin_coherent_amplitudes(j, theta, 0.0);
    std::vector<double> rho(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) rho[k] = a[k].real(); // phi = 0: amplitudes are real >= 0
    return rho;
}

// Q(node) summed over boson levels for a set of weighted states
void husimi_accumulate(const std::vector<const StateVector*>& states, const std::vector<double>& weights,
                       HusimiGrid& grid) {
    const BasisSpec& basis = states.front()->basis;
    const int sd = basis.spin_dim();
    const int np = grid.n_phi();

    parallel_for(grid.theta.size(), [&](std::size_t it) {
        const std::vector<double> rho = spin_amp_moduli(basis.j, grid.theta[it]);
        std::vector<Complex> phase(sd);
        for (int ip = 0; ip < np; ++ip) {
            const Complex step = std::polar(1.0, grid.phi[ip]); // conj(e^{-ik phi}) = e^{+ik phi}
            phase[0] = 1.0;
            for (int k = 1; k < sd; ++k) phase[k] = phase[k - 1] * step;
            double q = 0.0;
            for (std::size_t s = 0; s < states.size(); ++s) {
                const std::vector<Complex>& amp = states[s]->amp;
                double qs = 0.0;
                for (int n = 0; n < basis.n_max; ++n) {
                    const std::size_t off = basis.index(n, 0);
                    Complex v = 0.0;
                    for (int k = 0; k < sd; ++k) v += rho[k] * phase[k] * amp[off + k];
                    qs += std::norm(v);
                }
                q += weights[s] * qs;
            }
            grid.values[it * static_cast<std::size_t>(np) + ip] = q;
        }
    });
}

} // namespace

std::vector<Complex> boson_coherent_amplitudes(Complex alpha, int n_max) {
    std::vector<Complex> a(n_max);
    if (alpha == 0.0) {
        a[0] = 1.0;
        return a;
    }
    const double a2 = std::norm(alpha), la = std::log(std::abs(alpha)), ph = std::arg(alpha);
    for (int n = 0; n < n_max; ++n)
        a[n] = std::polar(std::exp(-0.5 * a2 + n * la - 0.5 * std::lgamma(n + 1.0)), n * ph);
    return a;
}

HusimiGrid spin_husimi(const StateVector& psi, const GridSpec& grid) {
    HusimiGrid g = make_grid(grid);
    husimi_accumulate({&psi}, {1.0}, g);
    return g;
}

HusimiGrid time_averaged_husimi(const SparseOperator& H, const SpectralBounds& bounds, const StateVector& psi0,
                                double t_half_window, const GridSpec& grid, int order) {
    if (t_half_window < 0.0) throw std::invalid_argument("time_averaged_husimi: T must be >= 0");
    const double a = bounds.half_width();
    const double at = a * t_half_window;
    if (order < 0) {
        order = chebyshev_order(at);
    } else {
        const std::vector<double> jn = bessel_j_array(at, order);
        if (2.0 * std::abs(jn[order]) > 1e-12)
            throw std::invalid_argument("time_averaged_husimi: order insufficient for aT (coefficient tail)");
    }

    const TimeAvgMatrix cmat = time_avg_coefficients(order, at);
    const int n1 = order + 1;
    Eigen::MatrixXcd C(n1, n1);
    for (int m = 0; m < n1; ++m)
        for (int n = 0; n < n1; ++n) C(m, n) = cmat.at(m, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(C);

    const double lmax = es.eigenvalues().maxCoeff();
    std::vector<int> keep;
    for (int q = 0; q < n1; ++q)
        if (es.eigenvalues()(q) > 1e-13 * lmax) keep.push_back(q);

    // filtered states Theta_q = sum_n conj(U_{nq}) T_n(H~) psi0, streamed over the recurrence
    const std::size_t dim = psi0.amp.size();
    std::vector<StateVector> theta(keep.size());
    for (auto& s : theta) {
        s.basis = psi0.basis;
        s.amp.assign(dim, 0.0);
    }
    {
        const double b = bounds.center();
        std::vector<Complex> t0 = psi0.amp, t1(dim), t2(dim);
        auto add = [&](int n, const std::vector<Complex>& tn) {
            for (std::size_t qi = 0; qi < keep.size(); ++qi) {
                const Complex u = std::conj(es.eigenvectors()(n, keep[qi]));
                for (std::size_t i = 0; i < dim; ++i) theta[qi].amp[i] += u * tn[i];
            }
        };
        H.apply(std::span<const Complex>(t0), std::span<Complex>(t1));
        for (std::size_t i = 0; i < dim; ++i) t1[i] = (t1[i] - b * t0[i]) / a;
        add(0, t0);
        if (order >= 1) add(1, t1);
        for (int n = 2; n <= order; ++n) {
            H.apply(std::span<const Complex>(t1), std::span<Complex>(t2));
            for (std::size_t i = 0; i < dim; ++i) t2[i] = 2.0 * ((t2[i] - b * t1[i]) / a) - t0[i];
            add(n, t2);
            t0.swap(t1);
            t1.swap(t2);
        }
    }

    std::vector<const StateVector*> ptrs(theta.size());
    std::vector<double> weights(theta.size());
    for (std::size_t qi = 0; qi < keep.size(); ++qi) {
        ptrs[qi] = &theta[qi];
        weights[qi] = es.eigenvalues()(keep[qi]);
    }
    HusimiGrid g = make_grid(grid);
    husimi_accumulate(ptrs, weights, g);
    return g;
}

HusimiGrid poincare_husimi(const StateVector& psi, double energy, const ModelParams& params, const GridSpec& grid) {
    params.validate();
    const BasisSpec& basis = psi.basis;
    const int sd = basis.spin_dim();
    HusimiGrid g = make_grid(grid);

    parallel_for(g.theta.size(), [&](std::size_t it) {
        const double theta = g.theta[it];
        const double jz = -std::cos(theta);
        const double rest = energy - jz;
        const std::size_t row = it * static_cast<std::size_t>(g.n_phi());
        if (rest < 0.0) {
            for (int ip = 0; ip < g.n_phi(); ++ip) g.values[row + ip] = kNaN;
            return;
        }
        const Complex alpha{0.0, std::sqrt(params.j * params.delta / params.omega * rest)};
        const std::vector<Complex> ba = boson_coherent_amplitudes(alpha, basis.n_max);
        const std::vector<double> rho = spin_amp_moduli(basis.j, theta);
        std::vector<Complex> phase(sd);
        for (int ip = 0; ip < g.n_phi(); ++ip) {
            const Complex step = std::polar(1.0, g.phi[ip]);
            phase[0] = 1.0;
            for (int k = 1; k < sd; ++k) phase[k] = phase[k - 1] * step;
            Complex ov = 0.0;
            for (int n = 0; n < basis.n_max; ++n) {
                const std::size_t off = basis.index(n, 0);
                Complex v = 0.0;
                for (int k = 0; k < sd; ++k) v += rho[k] * phase[k] * psi.amp[off + k];
                ov += std::conj(ba[n]) * v;
            }
            g.values[row + ip] = std::norm(ov);
        }
    });
    return g;
}

double spin_variance(const StateVector& psi, const SpinOps& ops) {
    const std::size_t dim = psi.amp.size();
    std::vector<std::vector<Complex>> u(3);
    u[0] = ops.jx.apply(psi.amp);
    u[1] = ops.jy.apply(psi.amp);
    u[2] = ops.jz.apply(psi.amp);
    double mean[3];
    for (int k = 0; k < 3; ++k) {
        Complex s = 0.0;
        for (std::size_t i = 0; i < dim; ++i) s += std::conj(psi.amp[i]) * u[k][i];
        mean[k] = s.real();
    }
    Eigen::Matrix3d cov;
    for (int k = 0; k < 3; ++k)
        for (int l = k; l < 3; ++l) {
            Complex s = 0.0;
            for (std::size_t i = 0; i < dim; ++i) s += std::conj(u[k][i]) * u[l][i];
            cov(k, l) = cov(l, k) = s.real() - mean[k] * mean[l]; // Re<u_k|u_l> = (1/2)<{Jk,Jl}>
        }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(cov);
    return es.eigenvalues()(0);
}

double spin_variance(const StateVector& psi) {
    return spin_variance(psi, build_spin_ops(psi.basis));
}

DiscRaster husimi_disc_projection(const HusimiGrid& grid, int size) {
    if (size < 2) throw std::invalid_argument("husimi_disc_projection: size must be >= 2");
    DiscRaster disc;
    disc.size = size;
    disc.pixels.assign(static_cast<std::size_t>(size) * size, kNaN);

    const int nt = grid.n_theta(), np = grid.n_phi();
    const double dtheta = grid.theta[1] - grid.theta[0];
    const double dphi = 2.0 * M_PI / np;

    for (int row = 0; row < size; ++row) {
        for (int col = 0; col < size; ++col) {
            const double x = -1.0 + 2.0 * (col + 0.5) / size;
            const double y = 1.0 - 2.0 * (row + 0.5) / size;
            const double r = std::hypot(x, y);
            if (r > 1.0) continue;
            const double theta = r * 0.5 * M_PI;
            double phi = std::atan2(-x, y); // 0 at the top, counterclockwise
            if (phi < 0.0) phi += 2.0 * M_PI;

            double ft = theta / dtheta;
            int it0 = static_cast<int>(ft);
            if (it0 >= nt - 1) it0 = nt - 2;
            const double wt = ft - it0;
            const double fp = phi / dphi;
            int ip0 = static_cast<int>(fp) % np;
            const int ip1 = (ip0 + 1) % np;
            const double wp = fp - static_cast<int>(fp);

            const double v00 = grid.value(it0, ip0), v01 = grid.value(it0, ip1);
            const double v10 = grid.value(it0 + 1, ip0), v11 = grid.value(it0 + 1, ip1);
            disc.pixels[static_cast<std::size_t>(row) * size + col] =
                (1.0 - wt) * ((1.0 - wp) * v00 + wp * v01) + wt * ((1.0 - wp) * v10 + wp * v11);
        }
    }
    return disc;
}

} // namespace dicke
