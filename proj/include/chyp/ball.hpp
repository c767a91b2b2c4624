#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace chyp {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

// Fixed numeric policy: matrix residuals at 1e-9, scalar identities at 1e-12,
// double precision throughout.
inline constexpr double kMatrixTol = 1e-9;
inline constexpr double kScalarTol = 1e-12;

class NotInBallError : public std::domain_error {
public:
    explicit NotInBallError(const std::string& what) : std::domain_error(what) {}
};

// Pseudo-Hermitian form of signature (n,1):
//   <z,w> = -z_0 conj(w_0) + sum_{k>=1} z_k conj(w_k).
// Conjugate-symmetric: <w,z> = conj(<z,w>). Throws on length mismatch.
Complex herm_form(const CVector& z, const CVector& w);

// q(z) = <z,z>, real up to roundoff (checked at 1e-12).
double quadratic_form(const CVector& z);

// q(z) < 0, i.e. z lies in the negative light cone.
bool in_negative_cone(const CVector& z);

// Signature matrix J = diag(-1, 1, ..., 1) of size (n+1).
Eigen::MatrixXd signature_matrix(int n);

// Residual ||M* J M - J||, max entry modulus. 0 for exact isometries.
double verify_isometry(const CMatrix& m);

// Point of the unit ball B^n in C^n, |z| < 1 strictly.
class BallPoint {
public:
    explicit BallPoint(CVector coords);

    // Origin of B^n.
    static BallPoint origin(int n);

    const CVector& coords() const { return coords_; }
    int dim() const { return static_cast<int>(coords_.size()); }
    double norm() const { return coords_.norm(); }
    double squared_norm() const { return coords_.squaredNorm(); }

private:
    CVector coords_;
};

// Point of the boundary sphere, | |z| - 1 | <= 1e-9.
class BoundaryPoint {
public:
    explicit BoundaryPoint(CVector coords);

    const CVector& coords() const { return coords_; }
    int dim() const { return static_cast<int>(coords_.size()); }

private:
    CVector coords_;
};

// Element of U(n,1): (n+1)x(n+1) complex matrix with M* J M = J up to 1e-9.
// The stored residual is verify_isometry(matrix).
class IsometryElement {
public:
    explicit IsometryElement(CMatrix matrix);

    static IsometryElement identity(int n);

    const CMatrix& matrix() const { return matrix_; }
    double unitarity_residual() const { return unitarity_residual_; }
    // Ambient ball dimension n (matrix is (n+1)x(n+1)).
    int dim() const { return static_cast<int>(matrix_.rows()) - 1; }

    // J-unitary inverse J M* J, exact up to the residual.
    IsometryElement inverse() const;

    IsometryElement operator*(const IsometryElement& rhs) const;

private:
    CMatrix matrix_;
    double unitarity_residual_;
};

// Homogeneous lift (1, b_1, ..., b_n).
CVector lift_from_ball(const BallPoint& b);

// Affine chart of a negative-cone line: divide by z_0. Requires q(z) < 0.
BallPoint project_to_ball(const CVector& z);

// Projective action of U(n,1) on B^n.
BallPoint apply_isometry(const IsometryElement& g, const BallPoint& b);

// Distance of the Bergman-type metric normalized so that totally real planes
// have curvature -1 and complex geodesics -4:
//   cosh^2 d(b1,b2) = <Z,W><W,Z> / (q(Z) q(W)),  Z, W the lifts.
// Specializes to cosh^2 d(0,z) = 1/(1-|z|^2).
double distance(const BallPoint& b1, const BallPoint& b2);

// d(0, g.0) without materializing points: cosh d = |M_00|.
double displacement(const IsometryElement& g);

// Visual quasi-metric on the boundary sphere: |1 - <p,q>_{C^n}|^{1/2}.
double koranyi_distance(const BoundaryPoint& p, const BoundaryPoint& q);

} // namespace chyp
