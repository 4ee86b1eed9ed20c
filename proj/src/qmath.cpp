#include "chsh/qmath.hpp"

#include <algorithm>
#include <cmath>

namespace chsh {

namespace {

void check_dims(int rows, int cols) {
    if (rows <= 0 || cols <= 0)
        throw std::invalid_argument("CMatrix: dimensions must be positive");
    if (rows > kDimCap || cols > kDimCap)
        throw std::invalid_argument("CMatrix: dimension exceeds cap of " + std::to_string(kDimCap));
}

} // namespace

CMatrix::CMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    check_dims(rows, cols);
    data_.assign(static_cast<size_t>(rows) * cols, cxd{0.0, 0.0});
}

CMatrix::CMatrix(int rows, int cols, std::vector<cxd> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    check_dims(rows, cols);
    if (data_.size() != static_cast<size_t>(rows) * cols)
        throw std::invalid_argument("CMatrix: entry count does not match dimensions");
    check_finite();
}

CMatrix CMatrix::identity(int n) {
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::operator+(const CMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw std::invalid_argument("CMatrix::operator+: dimension mismatch");
    CMatrix out(rows_, cols_);
    for (size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] + rhs.data_[i];
    return out;
}

CMatrix CMatrix::operator-(const CMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw std::invalid_argument("CMatrix::operator-: dimension mismatch");
    CMatrix out(rows_, cols_);
    for (size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] - rhs.data_[i];
    return out;
}

CMatrix CMatrix::operator*(const CMatrix& rhs) const {
    if (cols_ != rhs.rows_)
        throw std::invalid_argument("CMatrix::operator*: dimension mismatch");
    CMatrix out(rows_, rhs.cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int k = 0; k < cols_; ++k) {
            const cxd aik = (*this)(i, k);
            if (aik == cxd{0.0, 0.0}) continue;
            for (int j = 0; j < rhs.cols_; ++j)
                out(i, j) += aik * rhs(k, j);
        }
    }
    return out;
}

CMatrix CMatrix::operator*(double scale) const { return *this * cxd{scale, 0.0}; }

CMatrix CMatrix::operator*(cxd scale) const {
    CMatrix out(rows_, cols_);
    for (size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] * scale;
    return out;
}

CMatrix CMatrix::adjoint() const {
    CMatrix out(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            out(j, i) = std::conj((*this)(i, j));
    return out;
}

cxd CMatrix::trace() const {
    if (!square()) throw std::invalid_argument("CMatrix::trace: matrix not square");
    cxd t{0.0, 0.0};
    for (int i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

double CMatrix::max_abs_diff(const CMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw std::invalid_argument("CMatrix::max_abs_diff: dimension mismatch");
    double m = 0.0;
    for (size_t i = 0; i < data_.size(); ++i)
        m = std::max(m, std::abs(data_[i] - rhs.data_[i]));
    return m;
}

double CMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
}

void CMatrix::check_finite() const {
    for (const auto& z : data_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw numeric_error("CMatrix: non-finite entry");
}

CMatrix tensor(const CMatrix& a, const CMatrix& b) {
    const long rr = static_cast<long>(a.rows()) * b.rows();
    const long cc = static_cast<long>(a.cols()) * b.cols();
    if (rr > kDimCap || cc > kDimCap)
        throw std::invalid_argument("tensor: product dimension exceeds cap");
    CMatrix out(static_cast<int>(rr), static_cast<int>(cc));
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            const cxd aij = a(i, j);
            if (aij == cxd{0.0, 0.0}) continue;
            for (int k = 0; k < b.rows(); ++k)
                for (int l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return out;
}

double expectation(const CMatrix& op, const CMatrix& rho) {
    if (!op.square() || !rho.square() || op.rows() != rho.rows())
        throw std::invalid_argument("expectation: operands must be square and equal-dimensional");
    cxd t{0.0, 0.0};
    for (int i = 0; i < op.rows(); ++i)
        for (int k = 0; k < op.cols(); ++k)
            t += op(i, k) * rho(k, i);
    if (std::abs(t.imag()) >= kImagResidueTol)
        throw numeric_error("expectation: imaginary residue " + std::to_string(t.imag()));
    return t.real();
}

bool is_hermitian(const CMatrix& m, double tol) {
    if (!m.square()) throw std::invalid_argument("is_hermitian: matrix not square");
    for (int i = 0; i < m.rows(); ++i)
        for (int j = i; j < m.cols(); ++j)
            if (std::abs(m(i, j) - std::conj(m(j, i))) > tol) return false;
    return true;
}

std::vector<double> eigenvalues_hermitian(const CMatrix& m) {
    if (!m.square()) throw std::invalid_argument("eigenvalues_hermitian: matrix not square");
    if (!is_hermitian(m, kHermTol))
        throw std::invalid_argument("eigenvalues_hermitian: matrix not Hermitian");
    const int n = m.rows();
    CMatrix a = m;
    // symmetrize away roundoff so the iteration works on an exactly Hermitian copy
    for (int i = 0; i < n; ++i) {
        a(i, i) = cxd{a(i, i).real(), 0.0};
        for (int j = i + 1; j < n; ++j) {
            const cxd avg = 0.5 * (a(i, j) + std::conj(a(j, i)));
            a(i, j) = avg;
            a(j, i) = std::conj(avg);
        }
    }

    const double target = 1e-12;
    const int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q)
                off += 2.0 * std::norm(a(p, q));
        if (std::sqrt(off) < target) break;

        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cxd g = a(p, q);
                const double mag = std::abs(g);
                if (mag < 1e-300) continue;
                // phase out a_pq, then a real Jacobi rotation in the (p,q) plane
                const cxd phase = g / mag;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (app - aqq) / (2.0 * mag);
                const double t = (tau >= 0.0)
                                     ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                     : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // U restricted to (p,q): [[c, -s],[conj(phase)*s, conj(phase)*c]]
                const cxd upp{c, 0.0};
                const cxd upq{-s, 0.0};
                const cxd uqp = std::conj(phase) * s;
                const cxd uqq = std::conj(phase) * c;
                // A <- U^dagger A U ; columns first, then rows
                for (int i = 0; i < n; ++i) {
                    const cxd aip = a(i, p);
                    const cxd aiq = a(i, q);
                    a(i, p) = aip * upp + aiq * uqp;
                    a(i, q) = aip * upq + aiq * uqq;
                }
                for (int j = 0; j < n; ++j) {
                    const cxd apj = a(p, j);
                    const cxd aqj = a(q, j);
                    a(p, j) = std::conj(upp) * apj + std::conj(uqp) * aqj;
                    a(q, j) = std::conj(upq) * apj + std::conj(uqq) * aqj;
                }
            }
        }
    }

    std::vector<double> eigs(n);
    for (int i = 0; i < n; ++i) eigs[i] = a(i, i).real();
    std::sort(eigs.begin(), eigs.end());
    return eigs;
}

double min_eigenvalue(const CMatrix& m) { return eigenvalues_hermitian(m).front(); }

} // namespace chsh
