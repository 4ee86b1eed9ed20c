#ifndef CHSH_QMATH_HPP
#define CHSH_QMATH_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace chsh {

using cxd = std::complex<double>;

/// Raised when a computed quantity breaks a numeric invariant
/// (trace drift, imaginary residue, positivity loss, ...).
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr int kDimCap = 1024;        // joint-space cap
inline constexpr double kHermTol = 1e-10;
inline constexpr double kImagResidueTol = 1e-9;

/// Dense row-major complex matrix. All entries must stay finite.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(int rows, int cols);
    CMatrix(int rows, int cols, std::vector<cxd> entries);

    static CMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    cxd& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
    const cxd& operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

    CMatrix operator+(const CMatrix& rhs) const;
    CMatrix operator-(const CMatrix& rhs) const;
    CMatrix operator*(const CMatrix& rhs) const;
    CMatrix operator*(double scale) const;
    CMatrix operator*(cxd scale) const;

    CMatrix adjoint() const;
    cxd trace() const;

    /// max |entry| of (*this - rhs)
    double max_abs_diff(const CMatrix& rhs) const;
    double max_abs() const;

    /// Throws numeric_error if any entry is NaN/Inf.
    void check_finite() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<cxd> data_;
};

/// Kronecker product; result dims (a.rows*b.rows) x (a.cols*b.cols).
CMatrix tensor(const CMatrix& a, const CMatrix& b);

/// Re(tr(op * rho)); asserts the imaginary residue stays below tolerance.
double expectation(const CMatrix& op, const CMatrix& rho);

bool is_hermitian(const CMatrix& m, double tol = kHermTol);

/// All eigenvalues of a Hermitian matrix via cyclic complex Jacobi
/// rotations, returned ascending. Off-diagonal Frobenius norm is driven
/// below 1e-12.
std::vector<double> eigenvalues_hermitian(const CMatrix& m);

double min_eigenvalue(const CMatrix& m);

} // namespace chsh

#endif
