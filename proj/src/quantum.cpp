#include "dicke/quantum.hpp"

#include "dicke/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dicke {

namespace {

constexpr Complex I{0.0, 1.0};

double jp_coeff(double j, double m) { return std::sqrt(j * (j + 1.0) - m * (m + 1.0)); } // <m+1|J+|m>
double jm_coeff(double j, double m) { return std::sqrt(j * (j + 1.0) - m * (m - 1.0)); } // <m-1|J-|m>

} // namespace

void BasisSpec::validate(std::size_t max_dim) const {
    if (!(j > 0.0)) throw std::invalid_argument("BasisSpec: j must be > 0");
    const double two_j = 2.0 * j;
    if (std::abs(two_j - std::round(two_j)) > 1e-9)
        throw std::invalid_argument("BasisSpec: 2j must be a non-negative integer");
    if (n_max < 1) throw std::invalid_argument("BasisSpec: n_max must be >= 1");
    if (dim() > max_dim) throw std::invalid_argument("BasisSpec: dimension exceeds the configured maximum");
}

SparseOperator SparseOperator::from_triplets(std::size_t dim, std::vector<Triplet> triplets) {
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    SparseOperator op;
    op.dim_ = dim;
    op.row_ptr_.assign(dim + 1, 0);
    op.cols_.reserve(triplets.size());
    op.vals_.reserve(triplets.size());
    for (std::size_t i = 0; i < triplets.size();) {
        const std::size_t r = triplets[i].row, c = triplets[i].col;
        if (r >= dim || c >= dim) throw std::invalid_argument("SparseOperator: triplet out of range");
        Complex v = 0.0;
        for (; i < triplets.size() && triplets[i].row == r && triplets[i].col == c; ++i) v += triplets[i].value;
        if (v != 0.0) {
            op.cols_.push_back(c);
            op.vals_.push_back(v);
            ++op.row_ptr_[r + 1];
        }
    }
    for (std::size_t r = 0; r < dim; ++r) op.row_ptr_[r + 1] += op.row_ptr_[r];
    return op;
}

void SparseOperator::apply(std::span<const Complex> x, std::span<Complex> y) const {
    if (x.size() != dim_ || y.size() != dim_) throw std::invalid_argument("SparseOperator::apply: size mismatch");
    for (std::size_t r = 0; r < dim_; ++r) {
        Complex acc = 0.0;
        for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) acc += vals_[p] * x[cols_[p]];
        y[r] = acc;
    }
}

std::vector<Complex> SparseOperator::apply(const std::vector<Complex>& x) const {
    std::vector<Complex> y(dim_);
    apply(std::span<const Complex>(x), std::span<Complex>(y));
    return y;
}

double SparseOperator::hermiticity_defect() const {
    struct Entry {
        std::size_t row, col;
        Complex value;
    };
    std::vector<Entry> t;
    t.reserve(nnz());
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) t.push_back({cols_[p], r, vals_[p]});
    std::sort(t.begin(), t.end(), [](const Entry& a, const Entry& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    double defect = 0.0;
    std::size_t k = 0;
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
            while (k < t.size() && (t[k].row < r || (t[k].row == r && t[k].col < cols_[p]))) {
                defect = std::max(defect, std::abs(t[k].value)); // transpose entry with no partner
                ++k;
            }
            if (k < t.size() && t[k].row == r && t[k].col == cols_[p]) {
                defect = std::max(defect, std::abs(vals_[p] - std::conj(t[k].value)));
                ++k;
            } else {
                defect = std::max(defect, std::abs(vals_[p]));
            }
        }
    }
    for (; k < t.size(); ++k) defect = std::max(defect, std::abs(t[k].value));
    return defect;
}

double StateVector::norm() const {
    double s = 0.0;
    for (const Complex& c : amp) s += std::norm(c);
    return std::sqrt(s);
}

void StateVector::normalize() {
    const double n = norm();
    if (n == 0.0) throw std::invalid_argument("StateVector::normalize: zero vector");
    for (Complex& c : amp) c /= n;
}

Complex inner(const StateVector& a, const StateVector& b) {
    if (a.amp.size() != b.amp.size()) throw std::invalid_argument("inner: size mismatch");
    Complex s = 0.0;
    for (std::size_t i = 0; i < a.amp.size(); ++i) s += std::conj(a.amp[i]) * b.amp[i];
    return s;
}

Complex expectation(const SparseOperator& A, const StateVector& psi) {
    std::vector<Complex> y = A.apply(psi.amp);
    Complex s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += std::conj(psi.amp[i]) * y[i];
    return s;
}

SparseOperator build_hamiltonian(const ModelParams& params, const BasisSpec& basis) {
    params.validate();
    basis.validate();
    const int sd = basis.spin_dim();
    const double j = basis.j;
    std::vector<SparseOperator::Triplet> t;
    t.reserve(basis.dim() * 5);
    for (int n = 0; n < basis.n_max; ++n) {
        for (int k = 0; k < sd; ++k) {
            const double m = static_cast<double>(k) - j;
            const std::size_t row = basis.index(n, k);
            t.push_back({row, row, Complex{params.delta * m + params.omega * n, 0.0}});
            if (params.lambda == 0.0) continue;
            // lambda (a^+ + a) Jx, Jx = (J+ + J-)/2
            if (k + 1 < sd) {
                const double jx = 0.5 * jp_coeff(j, m);
                if (n + 1 < basis.n_max)
                    t.push_back({basis.index(n + 1, k + 1), row, Complex{params.lambda * std::sqrt(n + 1.0) * jx, 0.0}});
                if (n > 0)
                    t.push_back({basis.index(n - 1, k + 1), row, Complex{params.lambda * std::sqrt(static_cast<double>(n)) * jx, 0.0}});
            }
            if (k > 0) {
                const double jx = 0.5 * jm_coeff(j, m);
                if (n + 1 < basis.n_max)
                    t.push_back({basis.index(n + 1, k - 1), row, Complex{params.lambda * std::sqrt(n + 1.0) * jx, 0.0}});
                if (n > 0)
                    t.push_back({basis.index(n - 1, k - 1), row, Complex{params.lambda * std::sqrt(static_cast<double>(n)) * jx, 0.0}});
            }
        }
    }
    return SparseOperator::from_triplets(basis.dim(), std::move(t));
}

SpinOps build_spin_ops(const BasisSpec& basis) {
    basis.validate();
    const int sd = basis.spin_dim();
    const double j = basis.j;
    std::vector<SparseOperator::Triplet> tx, ty, tz;
    for (int n = 0; n < basis.n_max; ++n) {
        for (int k = 0; k < sd; ++k) {
            const double m = static_cast<double>(k) - j;
            const std::size_t row = basis.index(n, k);
            tz.push_back({row, row, Complex{m, 0.0}});
            if (k + 1 < sd) {
                const double c = jp_coeff(j, m); // <k+1|J+|k>
                tx.push_back({basis.index(n, k + 1), row, Complex{0.5 * c, 0.0}});
                ty.push_back({basis.index(n, k + 1), row, -0.5 * I * c});
            }
            if (k > 0) {
                const double c = jm_coeff(j, m); // <k-1|J-|k>
                tx.push_back({basis.index(n, k - 1), row, Complex{0.5 * c, 0.0}});
                ty.push_back({basis.index(n, k - 1), row, 0.5 * I * c});
            }
        }
    }
    SpinOps ops;
    ops.jx = SparseOperator::from_triplets(basis.dim(), std::move(tx));
    ops.jy = SparseOperator::from_triplets(basis.dim(), std::move(ty));
    ops.jz = SparseOperator::from_triplets(basis.dim(), std::move(tz));
    return ops;
}

BosonOps build_boson_ops(const BasisSpec& basis) {
    basis.validate();
    const int sd = basis.spin_dim();
    std::vector<SparseOperator::Triplet> ta, tad, tn;
    for (int n = 0; n < basis.n_max; ++n) {
        for (int k = 0; k < sd; ++k) {
            const std::size_t row = basis.index(n, k);
            tn.push_back({row, row, Complex{static_cast<double>(n), 0.0}});
            if (n > 0) // <n-1|a|n> = sqrt(n)
                ta.push_back({basis.index(n - 1, k), row, Complex{std::sqrt(static_cast<double>(n)), 0.0}});
            if (n + 1 < basis.n_max) // <n+1|a^+|n> = sqrt(n+1)
                tad.push_back({basis.index(n + 1, k), row, Complex{std::sqrt(n + 1.0), 0.0}});
        }
    }
    BosonOps ops;
    ops.a = SparseOperator::from_triplets(basis.dim(), std::move(ta));
    ops.adag = SparseOperator::from_triplets(basis.dim(), std::move(tad));
    ops.n = SparseOperator::from_triplets(basis.dim(), std::move(tn));
    return ops;
}

SparseOperator parity_operator(const BasisSpec& basis) {
    basis.validate();
    const int sd = basis.spin_dim();
    std::vector<SparseOperator::Triplet> t;
    t.reserve(basis.dim());
    for (int n = 0; n < basis.n_max; ++n)
        for (int k = 0; k < sd; ++k)
            t.push_back({basis.index(n, k), basis.index(n, k), Complex{((n + k) % 2 == 0) ? 1.0 : -1.0, 0.0}});
    return SparseOperator::from_triplets(basis.dim(), std::move(t));
}

std::vector<Complex> spin_coherent_amplitudes(double j, double theta, double phi) {
    const int sd = static_cast<int>(2.0 * j + 1.5);
    const double two_j = 2.0 * j;
    const double sh = std::sin(0.5 * theta), ch = std::cos(0.5 * theta);
    std::vector<Complex> amps(sd);
    for (int k = 0; k < sd; ++k) {
        const double kk = static_cast<double>(k);
        if ((sh == 0.0 && k > 0) || (ch == 0.0 && k < sd - 1)) {
            amps[k] = 0.0;
            continue;
        }
        double lg = 0.5 * (std::lgamma(two_j + 1.0) - std::lgamma(kk + 1.0) - std::lgamma(two_j - kk + 1.0));
        if (k > 0) lg += kk * std::log(sh);
        if (k < sd - 1) lg += (two_j - kk) * std::log(ch);
        amps[k] = std::polar(std::exp(lg), -kk * phi);
    }
    return amps;
}

StateVector coherent_product_state(Complex alpha, Complex z, const BasisSpec& basis) {
    basis.validate();
    const double a2 = std::norm(alpha);

    // boson amplitudes in log space
    std::vector<Complex> ba(basis.n_max);
    double head = 0.0;
    for (int n = 0; n < basis.n_max; ++n) {
        if (alpha == 0.0) {
            ba[n] = (n == 0) ? 1.0 : 0.0;
        } else {
            const double lg = -0.5 * a2 + n * std::log(std::abs(alpha)) - 0.5 * std::lgamma(n + 1.0);
            ba[n] = std::polar(std::exp(lg), n * std::arg(alpha));
        }
        head += std::norm(ba[n]);
    }
    const double tail = std::max(0.0, 1.0 - head);
    if (tail > 1e-8) {
        const int suggested = static_cast<int>(std::ceil(a2 + 9.0 * std::sqrt(a2 + 1.0) + 16.0));
        throw CutoffError("coherent_product_state: cutoff too small, boson tail weight " + std::to_string(tail),
                          std::max(suggested, 2 * basis.n_max));
    }

    // spin amplitudes sqrt(C(2j, k)) z^k / (1+|z|^2)^j
    const int sd = basis.spin_dim();
    const double two_j = 2.0 * basis.j;
    const double log1z = std::log1p(std::norm(z));
    std::vector<Complex> sa(sd);
    for (int k = 0; k < sd; ++k) {
        if (z == 0.0) {
            sa[k] = (k == 0) ? 1.0 : 0.0;
            continue;
        }
        const double kk = static_cast<double>(k);
        const double lg = 0.5 * (std::lgamma(two_j + 1.0) - std::lgamma(kk + 1.0) - std::lgamma(two_j - kk + 1.0))
                          + kk * std::log(std::abs(z)) - basis.j * log1z;
        sa[k] = std::polar(std::exp(lg), kk * std::arg(z));
    }

    StateVector psi;
    psi.basis = basis;
    psi.amp.resize(basis.dim());
    for (int n = 0; n < basis.n_max; ++n)
        for (int k = 0; k < sd; ++k) psi.amp[basis.index(n, k)] = ba[n] * sa[k];
    psi.normalize();
    return psi;
}

namespace {

// Restarted Lanczos with full reorthogonalization for the lowest eigenpair of
// sign*H. Deterministic all-ones start.
std::pair<double, std::vector<Complex>> lowest_eigenpair(const SparseOperator& H, double sign, double tol,
                                                         int max_cycles) {
    const std::size_t dim = H.dim();
    const int m = static_cast<int>(std::min<std::size_t>(dim, 40));

    std::vector<Complex> v0(dim, Complex{1.0 / std::sqrt(static_cast<double>(dim)), 0.0});
    double best_res = std::numeric_limits<double>::infinity();

    for (int cycle = 0; cycle < max_cycles; ++cycle) {
        std::vector<std::vector<Complex>> V;
        V.reserve(m);
        V.push_back(v0);
        std::vector<double> alpha, beta;
        std::vector<Complex> w(dim);

        for (int i = 0; i < m; ++i) {
            H.apply(std::span<const Complex>(V[i]), std::span<Complex>(w));
            if (sign < 0.0)
                for (Complex& c : w) c = -c;
            Complex a = 0.0;
            for (std::size_t p = 0; p < dim; ++p) a += std::conj(V[i][p]) * w[p];
            alpha.push_back(a.real());
            for (std::size_t p = 0; p < dim; ++p) w[p] -= a.real() * V[i][p];
            if (i > 0)
                for (std::size_t p = 0; p < dim; ++p) w[p] -= beta[i - 1] * V[i - 1][p];
            for (int pass = 0; pass < 2; ++pass) { // full reorthogonalization
                for (const auto& vv : V) {
                    Complex d = 0.0;
                    for (std::size_t p = 0; p < dim; ++p) d += std::conj(vv[p]) * w[p];
                    for (std::size_t p = 0; p < dim; ++p) w[p] -= d * vv[p];
                }
            }
            double nb = 0.0;
            for (const Complex& c : w) nb += std::norm(c);
            nb = std::sqrt(nb);
            if (i + 1 == m || nb < 1e-14) break;
            beta.push_back(nb);
            std::vector<Complex> vn(dim);
            for (std::size_t p = 0; p < dim; ++p) vn[p] = w[p] / nb;
            V.push_back(std::move(vn));
        }

        const int k = static_cast<int>(V.size());
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
        for (int i = 0; i < k; ++i) T(i, i) = alpha[i];
        for (int i = 0; i + 1 < k; ++i) T(i, i + 1) = T(i + 1, i) = beta[i];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
        const Eigen::VectorXd s = es.eigenvectors().col(0);

        std::vector<Complex> x(dim, 0.0);
        for (int i = 0; i < k; ++i)
            for (std::size_t p = 0; p < dim; ++p) x[p] += s(i) * V[i][p];
        double nx = 0.0;
        for (const Complex& c : x) nx += std::norm(c);
        nx = std::sqrt(nx);
        for (Complex& c : x) c /= nx;

        H.apply(std::span<const Complex>(x), std::span<Complex>(w));
        if (sign < 0.0)
            for (Complex& c : w) c = -c;
        Complex rq = 0.0;
        for (std::size_t p = 0; p < dim; ++p) rq += std::conj(x[p]) * w[p];
        double res = 0.0;
        for (std::size_t p = 0; p < dim; ++p) res += std::norm(w[p] - rq.real() * x[p]);
        res = std::sqrt(res);
        best_res = std::min(best_res, res);
        if (res < tol) return {rq.real(), std::move(x)};
        v0 = std::move(x);
    }
    throw ConvergenceError("Lanczos: no convergence after restart limit", best_res);
}

} // namespace

GroundState ground_state(const SparseOperator& H, const BasisSpec& basis, double tol) {
    auto [e, x] = lowest_eigenpair(H, +1.0, tol, 600);
    GroundState g;
    g.energy = e;
    g.state.basis = basis;
    g.state.amp = std::move(x);
    return g;
}

SpectralBounds spectral_bounds(const SparseOperator& H, double margin) {
    const double lo = lowest_eigenpair(H, +1.0, 1e-7, 600).first;
    const double hi = -lowest_eigenpair(H, -1.0, 1e-7, 600).first;
    const double pad = margin * std::max(hi - lo, 1e-10) + 1e-12 * std::max(std::abs(hi), std::abs(lo));
    return SpectralBounds{lo - pad, hi + pad};
}

namespace {

Eigen::MatrixXcd to_dense_matrix(const SparseOperator& op) {
    const auto n = static_cast<Eigen::Index>(op.dim());
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t r = 0; r < op.dim(); ++r)
        for (std::size_t p = op.row_ptr()[r]; p < op.row_ptr()[r + 1]; ++p)
            M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(op.cols()[p])) += op.values()[p];
    return M;
}

std::vector<Eigenpair> eigenpairs_dense(const SparseOperator& H, const BasisSpec& basis, double e_target,
                                        std::size_t count) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_dense_matrix(H));
    const auto n = es.eigenvalues().size();
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
        return std::abs(es.eigenvalues()(a) - e_target) < std::abs(es.eigenvalues()(b) - e_target);
    });
    idx.resize(std::min<std::size_t>(count, idx.size()));
    std::sort(idx.begin(), idx.end(),
              [&](Eigen::Index a, Eigen::Index b) { return es.eigenvalues()(a) < es.eigenvalues()(b); });
    std::vector<Eigenpair> out;
    for (Eigen::Index i : idx) {
        Eigenpair ep;
        ep.energy = es.eigenvalues()(i);
        ep.state.basis = basis;
        ep.state.amp.assign(es.eigenvectors().col(i).data(), es.eigenvectors().col(i).data() + n);
        out.push_back(std::move(ep));
    }
    return out;
}

// Chebyshev coefficients of a Gaussian bump exp(-(x-x0)^2/(2 sigma^2)) on [-1,1].
std::vector<double> gaussian_filter_coeffs(double x0, double sigma, int degree) {
    const int npts = 2 * (degree + 1);
    std::vector<double> f(npts);
    for (int i = 0; i < npts; ++i) {
        const double th = M_PI * (i + 0.5) / npts;
        const double x = std::cos(th);
        f[i] = std::exp(-0.5 * (x - x0) * (x - x0) / (sigma * sigma));
    }
    std::vector<double> c(degree + 1, 0.0);
    for (int nn = 0; nn <= degree; ++nn) {
        double acc = 0.0;
        for (int i = 0; i < npts; ++i) acc += f[i] * std::cos(nn * M_PI * (i + 0.5) / npts);
        c[nn] = (nn == 0 ? 1.0 : 2.0) * acc / npts;
    }
    return c;
}

std::vector<Eigenpair> eigenpairs_filtered(const SparseOperator& H, const BasisSpec& basis, double e_target,
                                           std::size_t count, const EigenpairsOptions& opts) {
    const std::size_t dim = H.dim();
    const SpectralBounds b = spectral_bounds(H);
    const double a = b.half_width(), ctr = b.center();
    const double x0 = std::clamp((e_target - ctr) / a, -0.98, 0.98);

    const std::size_t block = std::max<std::size_t>(2 * count, count + 8);
    if (block >= dim) return eigenpairs_dense(H, basis, e_target, count);

    // deterministic, mutually independent start block (discrete sine basis)
    Eigen::MatrixXcd X(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(block));
    for (std::size_t p = 0; p < block; ++p)
        for (std::size_t i = 0; i < dim; ++i)
            X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(p)) =
                std::sin(M_PI * (i + 1.0) * (p + 1.0) / (dim + 1.0));

    double sigma = 0.05;
    auto apply_scaled = [&](const Eigen::VectorXcd& v) {
        std::vector<Complex> in(v.data(), v.data() + v.size()), out(dim);
        H.apply(std::span<const Complex>(in), std::span<Complex>(out));
        Eigen::VectorXcd y = Eigen::Map<Eigen::VectorXcd>(out.data(), static_cast<Eigen::Index>(dim));
        return ((y - ctr * v) / a).eval();
    };

    double spacing_est = 0.0;
    for (int cycle = 0; cycle < opts.max_cycles; ++cycle) {
        const int degree = opts.filter_degree > 0
                               ? opts.filter_degree
                               : std::min(3000, std::max(200, static_cast<int>(8.0 / sigma)));
        const std::vector<double> c = gaussian_filter_coeffs(x0, sigma, degree);

        // y = f(H~) x by the Chebyshev recurrence, per block column
        for (std::size_t p = 0; p < block; ++p) {
            Eigen::VectorXcd t0 = X.col(static_cast<Eigen::Index>(p));
            Eigen::VectorXcd t1 = apply_scaled(t0);
            Eigen::VectorXcd acc = c[0] * t0 + c[1] * t1;
            for (int nn = 2; nn <= degree; ++nn) {
                Eigen::VectorXcd t2 = 2.0 * apply_scaled(t1) - t0;
                acc += c[nn] * t2;
                t0.swap(t1);
                t1.swap(t2);
            }
            X.col(static_cast<Eigen::Index>(p)) = acc;
        }

        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(X);
        X = qr.householderQ() * Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(dim),
                                                           static_cast<Eigen::Index>(block));

        // Rayleigh-Ritz
        Eigen::MatrixXcd HX(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(block));
        for (std::size_t p = 0; p < block; ++p) {
            std::vector<Complex> in(X.col(static_cast<Eigen::Index>(p)).data(),
                                    X.col(static_cast<Eigen::Index>(p)).data() + dim),
                out(dim);
            H.apply(std::span<const Complex>(in), std::span<Complex>(out));
            HX.col(static_cast<Eigen::Index>(p)) = Eigen::Map<Eigen::VectorXcd>(out.data(), static_cast<Eigen::Index>(dim));
        }
        Eigen::MatrixXcd S = X.adjoint() * HX;
        S = 0.5 * (S + S.adjoint()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(S);
        X = (X * es.eigenvectors()).eval();
        HX = (HX * es.eigenvectors()).eval();

        std::vector<std::pair<double, std::size_t>> ritz;
        for (std::size_t p = 0; p < block; ++p)
            ritz.push_back({es.eigenvalues()(static_cast<Eigen::Index>(p)), p});
        std::sort(ritz.begin(), ritz.end(), [&](const auto& l, const auto& r) {
            return std::abs(l.first - e_target) < std::abs(r.first - e_target);
        });

        bool converged = count <= ritz.size();
        for (std::size_t q = 0; q < count && q < ritz.size(); ++q) {
            const auto [th, p] = ritz[q];
            const double res = (HX.col(static_cast<Eigen::Index>(p)) - th * X.col(static_cast<Eigen::Index>(p))).norm();
            if (res > opts.tol) converged = false;
        }
        if (converged) {
            std::vector<Eigenpair> out;
            for (std::size_t q = 0; q < count && q < ritz.size(); ++q) {
                const auto [th, p] = ritz[q];
                Eigenpair ep;
                ep.energy = th;
                ep.state.basis = basis;
                ep.state.amp.assign(X.col(static_cast<Eigen::Index>(p)).data(),
                                    X.col(static_cast<Eigen::Index>(p)).data() + dim);
                out.push_back(std::move(ep));
            }
            std::sort(out.begin(), out.end(), [](const Eigenpair& l, const Eigenpair& r) { return l.energy < r.energy; });
            return out;
        }

        // sharpen the filter to the observed local level spacing
        if (ritz.size() >= 2) {
            std::vector<double> es_sorted;
            for (std::size_t q = 0; q < std::min<std::size_t>(count + 2, ritz.size()); ++q)
                es_sorted.push_back(ritz[q].first);
            std::sort(es_sorted.begin(), es_sorted.end());
            double sp = 0.0;
            for (std::size_t q = 1; q < es_sorted.size(); ++q) sp += es_sorted[q] - es_sorted[q - 1];
            sp /= std::max<std::size_t>(1, es_sorted.size() - 1);
            spacing_est = sp / a;
        }
        const double target = std::max(2.0 * spacing_est, 1e-4);
        sigma = std::max(0.6 * sigma, std::min(sigma, target));
    }
    throw ConvergenceError("eigenpairs_near: filtered iteration did not converge");
}

} // namespace

std::vector<Eigenpair> eigenpairs_near(const SparseOperator& H, const BasisSpec& basis, double e_target,
                                       std::size_t count, const EigenpairsOptions& opts) {
    if (count < 1) throw std::invalid_argument("eigenpairs_near: count must be >= 1");
    if (H.dim() <= opts.dense_threshold) return eigenpairs_dense(H, basis, e_target, count);
    return eigenpairs_filtered(H, basis, e_target, count, opts);
}

std::vector<std::size_t> overlap_rank(const std::vector<StateVector>& states, const StateVector& psi0) {
    std::vector<double> ov(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) ov[i] = std::abs(inner(states[i], psi0));
    std::vector<std::size_t> idx(states.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return ov[a] > ov[b]; });
    return idx;
}

int choose_n_max(const ModelParams& params, double alpha_abs2) {
    params.validate();
    const double kappa = params.kappa();
    int n = std::max(16, static_cast<int>(std::ceil(4.0 * params.j * kappa * params.delta / params.omega)));
    for (; n <= 4096; n *= 2) {
        // coherent tail (Poisson beyond the cutoff)
        double tail = 0.0;
        if (alpha_abs2 > 0.0) {
            double logp = -alpha_abs2 + n * std::log(alpha_abs2) - std::lgamma(n + 1.0);
            for (int q = n; q < n + 2048; ++q) {
                tail += std::exp(logp);
                logp += std::log(alpha_abs2) - std::log(q + 1.0);
                if (std::exp(logp) < 1e-18) break;
            }
        }
        if (tail >= 1e-8) continue;

        BasisSpec basis{params.j, n};
        const SparseOperator H = build_hamiltonian(params, basis);
        const GroundState g = ground_state(H, basis, 1e-9);
        double top = 0.0;
        for (int k = 0; k < basis.spin_dim(); ++k) top += std::norm(g.state.amp[basis.index(n - 1, k)]);
        if (top < 1e-10) return n;
    }
    throw CutoffError("choose_n_max: no adequate cutoff below 4096", 4096);
}

} // namespace dicke
