#include "dicke/chebyshev.hpp"

#include "dicke/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dicke {

namespace {

constexpr Complex I{0.0, 1.0};
constexpr double kCoeffTol = 1e-14;
constexpr double kMaxStep = 200.0; // cap on a * t_step

Complex minus_i_pow(int n) {
    switch (n & 3) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, -1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, 1.0};
    }
}

} // namespace

std::vector<double> bessel_j_array(double x, int n_max) {
    std::vector<double> j(n_max + 1, 0.0);
    if (x == 0.0) {
        j[0] = 1.0;
        return j;
    }
    const double ax = std::abs(x);
    const int start = static_cast<int>(std::max<double>(n_max, ax)) + 16 +
                      static_cast<int>(2.0 * std::sqrt(std::max<double>(n_max, ax)));
    double jp = 0.0, jc = 1e-300;
    double norm = 0.0;
    for (int n = start; n > 0; --n) {
        const double jm = 2.0 * n / ax * jc - jp;
        jp = jc;
        jc = jm;
        if (std::abs(jc) > 1e250) { // rescale to avoid overflow
            const double s = 1e-250;
            jc *= s;
            jp *= s;
            norm *= s;
            for (int q = n; q <= n_max; ++q) j[q] *= s;
        }
        if (n - 1 <= n_max) j[n - 1] = jc;
        if (((n - 1) & 1) == 0) norm += (n == 1 ? 1.0 : 2.0) * jc;
        else if (n - 1 == 0) norm += jc;
    }
    // norm now holds J0 + 2 sum_{k>=1} J_{2k} = 1 up to scale
    for (double& v : j) v /= norm;
    if (x < 0.0)
        for (int n = 1; n <= n_max; n += 2) j[n] = -j[n];
    return j;
}

int chebyshev_order(double a_tau) {
    const double at = std::abs(a_tau);
    int n = static_cast<int>(std::ceil(at + 30.0 * std::cbrt(at + 4.0) + 16.0));
    const std::vector<double> jn = bessel_j_array(at, n);
    while (n > 1 && 2.0 * std::abs(jn[n - 1]) < kCoeffTol) --n;
    return n;
}

ChebyshevPropagator::ChebyshevPropagator(const SparseOperator& H, SpectralBounds bounds)
    : h_(&H), bounds_(bounds), a_(bounds.half_width()), b_(bounds.center()) {
    if (!(a_ > 0.0)) throw std::invalid_argument("ChebyshevPropagator: empty spectral bounds");
}

void ChebyshevPropagator::apply_scaled(std::span<const Complex> x, std::span<Complex> y) const {
    h_->apply(x, y);
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = (y[i] - b_ * x[i]) / a_;
}

StateVector ChebyshevPropagator::propagate(const StateVector& psi0, double t) const {
    StateVector psi = psi0;
    const std::size_t dim = psi.amp.size();
    if (dim != h_->dim()) throw std::invalid_argument("propagate: state dimension mismatch");
    if (t == 0.0) return psi;

    const double dir = t > 0.0 ? 1.0 : -1.0;
    double remaining = std::abs(t);
    std::vector<Complex> t0(dim), t1(dim), t2(dim), acc(dim);

    while (remaining > 0.0) {
        const double tau = std::min(remaining, kMaxStep / a_);
        remaining -= tau;
        const double at = a_ * tau;
        const int order = chebyshev_order(at);
        const std::vector<double> jn = bessel_j_array(at, order);

        t0 = psi.amp;
        apply_scaled(t0, t1);
        for (std::size_t i = 0; i < dim; ++i) acc[i] = jn[0] * t0[i];
        {
            Complex c1 = 2.0 * minus_i_pow(1) * jn[1];
            if (dir < 0.0) c1 = std::conj(c1);
            for (std::size_t i = 0; i < dim; ++i) acc[i] += c1 * t1[i];
        }
        for (int n = 2; n <= order; ++n) {
            apply_scaled(t1, t2);
            for (std::size_t i = 0; i < dim; ++i) t2[i] = 2.0 * t2[i] - t0[i];
            Complex cn = 2.0 * minus_i_pow(n) * jn[n];
            if (dir < 0.0) cn = std::conj(cn);
            for (std::size_t i = 0; i < dim; ++i) acc[i] += cn * t2[i];
            t0.swap(t1);
            t1.swap(t2);
        }
        const Complex phase = std::exp(-I * b_ * dir * tau);
        for (std::size_t i = 0; i < dim; ++i) psi.amp[i] = phase * acc[i];

        const double norm = psi.norm();
        if (std::abs(norm - 1.0) > 1e-10)
            throw CutoffError("propagate: norm drift " + std::to_string(norm - 1.0) +
                                  "; increase n_max (or check spectral bounds)",
                              2 * psi.basis.n_max);
    }
    return psi;
}

Spectrum kpm_green_function(const SparseOperator& H, const StateVector& psi0, const SparseOperator& A,
                            const SparseOperator& B, int moments, const OmegaGrid& grid,
                            KpmKernel kernel, const SpectralBounds* bounds) {
    if (moments < 8) throw std::invalid_argument("kpm_green_function: moments must be >= 8");
    if (grid.n < 2 || !(grid.hi > grid.lo)) throw std::invalid_argument("kpm_green_function: bad grid");

    const SpectralBounds bb = bounds ? *bounds : spectral_bounds(H);
    const double a = bb.half_width(), b = bb.center();
    const double span = bb.e_max - bb.e_min;
    if (std::max(std::abs(grid.lo), std::abs(grid.hi)) > 1.02 * span)
        throw std::invalid_argument("kpm_green_function: grid outside the scaled spectral bounds");

    const std::size_t dim = H.dim();
    std::vector<Complex> hx(dim);
    H.apply(std::span<const Complex>(psi0.amp), std::span<Complex>(hx));
    Complex e0c = 0.0;
    for (std::size_t i = 0; i < dim; ++i) e0c += std::conj(psi0.amp[i]) * hx[i];
    const double e0 = e0c.real();

    // cross moments mu_n = <A psi0 | T_n(H~) | B psi0>
    std::vector<Complex> u = B.apply(psi0.amp);
    std::vector<Complex> w = A.apply(psi0.amp);
    std::vector<Complex> mu(moments);
    {
        std::vector<Complex> t0 = u, t1(dim), t2(dim);
        auto dot_w = [&](const std::vector<Complex>& v) {
            Complex s = 0.0;
            for (std::size_t i = 0; i < dim; ++i) s += std::conj(w[i]) * v[i];
            return s;
        };
        H.apply(std::span<const Complex>(t0), std::span<Complex>(t1));
        for (std::size_t i = 0; i < dim; ++i) t1[i] = (t1[i] - b * t0[i]) / a;
        mu[0] = dot_w(t0);
        if (moments > 1) mu[1] = dot_w(t1);
        for (int n = 2; n < moments; ++n) {
            H.apply(std::span<const Complex>(t1), std::span<Complex>(t2));
            for (std::size_t i = 0; i < dim; ++i) t2[i] = 2.0 * ((t2[i] - b * t1[i]) / a) - t0[i];
            mu[n] = dot_w(t2);
            t0.swap(t1);
            t1.swap(t2);
        }
    }

    // kernel damping
    std::vector<double> g(moments);
    if (kernel == KpmKernel::jackson) {
        const double M1 = moments + 1.0;
        for (int n = 0; n < moments; ++n)
            g[n] = ((M1 - n) * std::cos(M_PI * n / M1) + std::sin(M_PI * n / M1) / std::tan(M_PI / M1)) / M1;
    } else {
        const double lam = 4.0;
        for (int n = 0; n < moments; ++n)
            g[n] = std::sinh(lam * (1.0 - static_cast<double>(n) / moments)) / std::sinh(lam);
    }
    std::vector<Complex> coeff(moments);
    for (int n = 0; n < moments; ++n) coeff[n] = (n == 0 ? 1.0 : 2.0) * g[n] * mu[n];

    auto series = [&](double x) -> Complex { // sum_n coeff_n T_n(x) by Clenshaw
        Complex bk1 = 0.0, bk2 = 0.0;
        for (int n = moments - 1; n >= 1; --n) {
            const Complex bk = coeff[n] + 2.0 * x * bk1 - bk2;
            bk2 = bk1;
            bk1 = bk;
        }
        return coeff[0] + x * bk1 - bk2;
    };
    auto rho = [&](double x) -> Complex {
        if (std::abs(x) >= 1.0 - 1e-12) return 0.0;
        return series(x) / (M_PI * std::sqrt(1.0 - x * x));
    };

    Spectrum s;
    s.kernel = (kernel == KpmKernel::jackson) ? "jackson" : "lorentz";
    s.moments = moments;
    s.e0 = e0;
    s.bounds = bb;
    s.omega.resize(grid.n);
    s.values.resize(grid.n);
    double max_imag = 0.0, max_real = 0.0;
    for (std::size_t i = 0; i < grid.n; ++i) {
        const double om = grid.lo + (grid.hi - grid.lo) * static_cast<double>(i) / static_cast<double>(grid.n - 1);
        const double xp = (om + e0 - b) / a;
        const double xm = (e0 - om - b) / a;
        const Complex val = 2.0 * M_PI * I / a * (rho(xp) - std::conj(rho(xm)));
        s.omega[i] = om;
        s.values[i] = val.real();
        max_imag = std::max(max_imag, std::abs(val.imag()));
        max_real = std::max(max_real, std::abs(val.real()));
    }
    if (max_imag > 1e-8 * std::max(max_real, 1.0))
        throw ConvergenceError("kpm_green_function: output not real; state is not a ground state?", max_imag);
    return s;
}

Spectrum gaussian_smooth(const Spectrum& s, double width) {
    if (s.omega.size() < 3 || width <= 0.0) return s;
    const double d = s.omega[1] - s.omega[0];
    Spectrum out = s;
    const int half = static_cast<int>(std::ceil(6.0 * width / d));
    std::vector<double> ker(2 * half + 1);
    double ksum = 0.0;
    for (int q = -half; q <= half; ++q) {
        ker[q + half] = std::exp(-0.5 * (q * d) * (q * d) / (width * width));
        ksum += ker[q + half];
    }
    for (double& v : ker) v /= ksum;
    const int n = static_cast<int>(s.values.size());
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int q = -half; q <= half; ++q) {
            const int p = i + q;
            if (p >= 0 && p < n) acc += ker[q + half] * s.values[p];
        }
        out.values[i] = acc;
    }
    return out;
}

std::vector<Peak> peak_extract(const Spectrum& s, double rel_threshold) {
    std::vector<Peak> peaks;
    const std::size_t n = s.values.size();
    if (n < 3) return peaks;
    double vmax = 0.0;
    for (double v : s.values) vmax = std::max(vmax, v);
    if (vmax <= 0.0) return peaks;
    const double thresh = rel_threshold * vmax;

    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(s.values[i] > s.values[i - 1] && s.values[i] >= s.values[i + 1] && s.values[i] >= thresh)) continue;
        // flanking minima
        std::size_t lo = i, hi = i;
        while (lo > 0 && s.values[lo - 1] < s.values[lo]) --lo;
        while (hi + 1 < n && s.values[hi + 1] < s.values[hi]) ++hi;
        double weight = 0.0;
        for (std::size_t q = lo; q < hi; ++q)
            weight += 0.5 * (s.values[q] + s.values[q + 1]) * (s.omega[q + 1] - s.omega[q]);
        // quadratic refinement of the position
        const double y0 = s.values[i - 1], y1 = s.values[i], y2 = s.values[i + 1];
        const double denom = y0 - 2.0 * y1 + y2;
        double pos = s.omega[i];
        if (denom < 0.0) pos += 0.5 * (y0 - y2) / denom * (s.omega[i + 1] - s.omega[i]);
        peaks.push_back({pos, weight});
    }
    std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) { return a.position < b.position; });
    return peaks;
}

namespace {

// In-place forward DFT, X_k = sum_v x_v e^{-2 pi i k v / n}; n must be a power of two.
void fft_pow2(std::vector<Complex>& x) {
    const std::size_t n = x.size();
    for (std::size_t i = 1, rev = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; rev & bit; bit >>= 1) rev ^= bit;
        rev ^= bit;
        if (i < rev) std::swap(x[i], x[rev]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * M_PI / static_cast<double>(len);
        const Complex wl = std::polar(1.0, ang);
        for (std::size_t i = 0; i < n; i += len) {
            Complex w{1.0, 0.0};
            for (std::size_t k = 0; k < len / 2; ++k) {
                const Complex a = x[i + k];
                const Complex b = x[i + k + len / 2] * w;
                x[i + k] = a + b;
                x[i + k + len / 2] = a - b;
                w *= wl;
            }
        }
    }
}

std::vector<Complex> time_avg_raw(int order, double a_t, int S) {
    const int N1 = order + 1;
    // kernel sinc(aT (sin x_nu - sin x_mu)) on the periodic grid x_nu = 2 pi nu / S;
    // both angle integrals collapse to DFTs of the kernel columns
    std::vector<double> sx(S);
    for (int v = 0; v < S; ++v) sx[v] = std::sin(2.0 * M_PI * v / S);
    auto sinc = [](double u) { return u == 0.0 ? 1.0 : std::sin(u) / u; };

    // B[n][u] = sum_v e^{-i n x_v} sinc(aT (sin x_v - sin x_u))
    std::vector<Complex> B(static_cast<std::size_t>(N1) * S);
    std::vector<Complex> col(S);
    for (int u = 0; u < S; ++u) {
        for (int v = 0; v < S; ++v) col[v] = sinc(a_t * (sx[v] - sx[u]));
        fft_pow2(col);
        for (int n = 0; n < N1; ++n) B[static_cast<std::size_t>(n) * S + u] = col[n];
    }

    std::vector<Complex> C(static_cast<std::size_t>(N1) * N1);
    std::vector<Complex> row(S);
    for (int n = 0; n < N1; ++n) {
        // sum_u e^{+i m x_u} B[n][u] = conj(DFT(conj(B[n][.])))[m]
        for (int u = 0; u < S; ++u) row[u] = std::conj(B[static_cast<std::size_t>(n) * S + u]);
        fft_pow2(row);
        const double fn = (n == 0) ? 1.0 : 2.0;
        for (int m = 0; m < N1; ++m) {
            const double fm = (m == 0) ? 1.0 : 2.0;
            const Complex ph = std::conj(minus_i_pow(((m - n) % 4 + 4) % 4)); // i^(m-n)
            C[static_cast<std::size_t>(m) * N1 + n] =
                fm * fn * ph * std::conj(row[m]) / (static_cast<double>(S) * S);
        }
    }
    return C;
}

double max_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

} // namespace

TimeAvgMatrix time_avg_coefficients(int order, double a_t, int quad_size) {
    if (order < 0) throw std::invalid_argument("time_avg_coefficients: order must be >= 0");
    if (!(a_t >= 0.0)) throw std::invalid_argument("time_avg_coefficients: aT must be >= 0");

    TimeAvgMatrix m;
    m.order = order;
    m.a_t = a_t;

    if (quad_size > 0) {
        std::vector<Complex> c1 = time_avg_raw(order, a_t, quad_size);
        std::vector<Complex> c2 = time_avg_raw(order, a_t, 2 * quad_size);
        if (max_diff(c1, c2) > 1e-8)
            throw ConvergenceError("time_avg_coefficients: quad_size too small (doubling changes C by > 1e-8)",
                                   max_diff(c1, c2));
        m.quad_size = quad_size;
        m.c = std::move(c1);
        return m;
    }

    int S = 64;
    while (S < 4 * (order + 1)) S *= 2;
    while (S < static_cast<int>(4.0 * a_t)) S *= 2;
    std::vector<Complex> prev = time_avg_raw(order, a_t, S);
    for (; S <= (1 << 15); S *= 2) {
        std::vector<Complex> next = time_avg_raw(order, a_t, 2 * S);
        if (max_diff(prev, next) <= 1e-8) {
            m.quad_size = 2 * S;
            m.c = std::move(next);
            return m;
        }
        prev = std::move(next);
    }
    throw ConvergenceError("time_avg_coefficients: quadrature did not converge");
}

} // namespace dicke
