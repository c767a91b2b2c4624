#include "chyp/ball.hpp"

#include <cmath>

namespace chyp {

Complex herm_form(const CVector& z, const CVector& w) {
    if (z.size() != w.size())
        throw std::invalid_argument("herm_form: length mismatch (" +
                                    std::to_string(z.size()) + " vs " +
                                    std::to_string(w.size()) + ")");
    if (z.size() == 0)
        throw std::invalid_argument("herm_form: empty vectors");
    Complex s = -z(0) * std::conj(w(0));
    for (Eigen::Index k = 1; k < z.size(); ++k)
        s += z(k) * std::conj(w(k));
    return s;
}

double quadratic_form(const CVector& z) {
    Complex q = herm_form(z, z);
    if (std::abs(q.imag()) > kScalarTol * (1.0 + std::abs(q.real())))
        throw std::logic_error("quadratic_form: non-real value");
    return q.real();
}

bool in_negative_cone(const CVector& z) { return quadratic_form(z) < 0.0; }

Eigen::MatrixXd signature_matrix(int n) {
    Eigen::MatrixXd j = Eigen::MatrixXd::Identity(n + 1, n + 1);
    j(0, 0) = -1.0;
    return j;
}

double verify_isometry(const CMatrix& m) {
    if (m.rows() != m.cols() || m.rows() < 2)
        throw std::invalid_argument("verify_isometry: need a square matrix of size >= 2");
    const Eigen::Index n1 = m.rows();
    CMatrix jm = m;
    jm.row(0) *= -1.0;               // J M
    CMatrix r = m.adjoint() * jm;    // M* J M
    r(0, 0) += 1.0;                  // subtract J
    for (Eigen::Index k = 1; k < n1; ++k) r(k, k) -= 1.0;
    return r.cwiseAbs().maxCoeff();
}

BallPoint::BallPoint(CVector coords) : coords_(std::move(coords)) {
    if (coords_.size() < 1)
        throw std::invalid_argument("BallPoint: empty coordinate vector");
    if (!coords_.allFinite())
        throw std::invalid_argument("BallPoint: non-finite coordinates");
    if (coords_.squaredNorm() >= 1.0)
        throw NotInBallError("BallPoint: |z| >= 1");
}

BallPoint BallPoint::origin(int n) { return BallPoint(CVector::Zero(n)); }

BoundaryPoint::BoundaryPoint(CVector coords) : coords_(std::move(coords)) {
    if (coords_.size() < 1)
        throw std::invalid_argument("BoundaryPoint: empty coordinate vector");
    if (std::abs(coords_.norm() - 1.0) > kMatrixTol)
        throw std::invalid_argument("BoundaryPoint: | |z| - 1 | > 1e-9");
}

IsometryElement::IsometryElement(CMatrix matrix) : matrix_(std::move(matrix)) {
    unitarity_residual_ = verify_isometry(matrix_);
    if (!(unitarity_residual_ <= kMatrixTol))
        throw std::invalid_argument("IsometryElement: unitarity residual " +
                                    std::to_string(unitarity_residual_) + " exceeds 1e-9");
}

IsometryElement IsometryElement::identity(int n) {
    return IsometryElement(CMatrix::Identity(n + 1, n + 1));
}

IsometryElement IsometryElement::inverse() const {
    const Eigen::Index n1 = matrix_.rows();
    CMatrix inv = matrix_.adjoint();
    // J M* J: negate first row and first column of M*, diagonal corner twice.
    for (Eigen::Index k = 1; k < n1; ++k) {
        inv(0, k) = -inv(0, k);
        inv(k, 0) = -inv(k, 0);
    }
    return IsometryElement(std::move(inv));
}

IsometryElement IsometryElement::operator*(const IsometryElement& rhs) const {
    return IsometryElement(matrix_ * rhs.matrix());
}

CVector lift_from_ball(const BallPoint& b) {
    CVector z(b.dim() + 1);
    z(0) = 1.0;
    z.tail(b.dim()) = b.coords();
    return z;
}

BallPoint project_to_ball(const CVector& z) {
    if (!in_negative_cone(z))
        throw NotInBallError("project_to_ball: q(z) >= 0");
    if (std::abs(z(0)) < kScalarTol)
        throw NotInBallError("project_to_ball: |z_0| below 1e-12, refusing to renormalize");
    return BallPoint(z.tail(z.size() - 1) / z(0));
}

BallPoint apply_isometry(const IsometryElement& g, const BallPoint& b) {
    if (g.dim() != b.dim())
        throw std::invalid_argument("apply_isometry: dimension mismatch");
    return project_to_ball(g.matrix() * lift_from_ball(b));
}

double distance(const BallPoint& b1, const BallPoint& b2) {
    if (b1.dim() != b2.dim())
        throw std::invalid_argument("distance: dimension mismatch");
    const CVector z = lift_from_ball(b1);
    const CVector w = lift_from_ball(b2);
    const Complex h = herm_form(z, w);
    const double c2 = std::norm(h) / (quadratic_form(z) * quadratic_form(w));
    return std::acosh(std::max(1.0, std::sqrt(c2)));
}

double displacement(const IsometryElement& g) {
    // g.0 lifts to column 0, so cosh^2 d = |M_00|^2 / (-q(col 0)). The
    // denominator is -1 up to the unitarity residual; dividing it out keeps
    // the value consistent with distance(origin, image) under drift.
    const CVector col0 = g.matrix().col(0);
    const double c2 = std::norm(g.matrix()(0, 0)) / (-quadratic_form(col0));
    return std::acosh(std::max(1.0, std::sqrt(c2)));
}

double koranyi_distance(const BoundaryPoint& p, const BoundaryPoint& q) {
    if (p.dim() != q.dim())
        throw std::invalid_argument("koranyi_distance: dimension mismatch");
    Complex ip = 0.0;
    for (Eigen::Index k = 0; k < p.coords().size(); ++k)
        ip += p.coords()(k) * std::conj(q.coords()(k));
    return std::sqrt(std::abs(1.0 - ip));
}

} // namespace chyp
