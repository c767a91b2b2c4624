#include "chyp/groups.hpp"

#include <cmath>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

#include "chyp/rng.hpp"

namespace chyp {

namespace {

constexpr double kPi = std::numbers::pi;

double round_residual(const CMatrix& m) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const Complex e = m(i, j);
            worst = std::max(worst, std::abs(e.real() - std::round(e.real())));
            worst = std::max(worst, std::abs(e.imag() - std::round(e.imag())));
        }
    return worst;
}

// Anti-Moebius maps z -> (m00 conj(z) + m01)/(m10 conj(z) + m11) represent
// the reflections; a product of two of them is the Moebius map M1 conj(M2).
using Mat2c = Eigen::Matrix2cd;

Mat2c normalize_det(const Mat2c& m) {
    return m / std::sqrt(m.determinant());
}

// Inverse Cayley transform: SU(1,1) -> SL(2,R) for C = [[1,-i],[1,i]].
Eigen::Matrix2d su11_to_sl2r(const Mat2c& b) {
    Mat2c c;
    c << Complex(1, 0), Complex(0, -1), Complex(1, 0), Complex(0, 1);
    Mat2c cinv;
    cinv << Complex(0.5, 0), Complex(0.5, 0), Complex(0, 0.5), Complex(0, -0.5);
    Mat2c a = cinv * b * c;
    if (a.imag().cwiseAbs().maxCoeff() > 1e-10)
        throw std::logic_error("su11_to_sl2r: non-real result");
    return a.real();
}

struct TriangleGenerators {
    Eigen::Matrix2d a;  // rotation by 2*pi/p about vertex A (the basepoint)
    Eigen::Matrix2d b;  // rotation by 2*pi/q about vertex B
};

// Hyperbolic (pi/p, pi/q, pi/r) triangle with vertex A at the disk origin and
// side AB on the real axis. Side lengths come from the dual law of cosines,
// cosh(AB) = (cos C + cos A cos B)/(sin A sin B); the rotations are products
// of two reflections in the sides.
TriangleGenerators triangle_rotations(int p, int q, int r) {
    if (p < 2 || q < 2 || r < 2)
        throw std::invalid_argument("triangle: orders must be >= 2");
    // 1/p + 1/q + 1/r < 1, tested exactly in integers.
    if (static_cast<long long>(q) * r + static_cast<long long>(p) * r +
            static_cast<long long>(p) * q >=
        static_cast<long long>(p) * q * r)
        throw std::invalid_argument("triangle: 1/p + 1/q + 1/r must be < 1 (hyperbolic)");

    const double alpha = kPi / p, beta = kPi / q, gamma = kPi / r;
    const double cosh_ab =
        (std::cos(gamma) + std::cos(alpha) * std::cos(beta)) / (std::sin(alpha) * std::sin(beta));
    const double cosh_ac =
        (std::cos(beta) + std::cos(alpha) * std::cos(gamma)) / (std::sin(alpha) * std::sin(gamma));

    // Curvature -1 disk: Euclidean radius of a point at distance d is tanh(d/2).
    const double ab = std::acosh(cosh_ab);
    const double ac = std::acosh(cosh_ac);
    const Complex vb(std::tanh(ab / 2.0), 0.0);
    const Complex vc = std::tanh(ac / 2.0) * Complex(std::cos(alpha), std::sin(alpha));

    // Geodesic through B and C: circle orthogonal to the unit circle,
    // |center|^2 = radius^2 + 1, solved from 2 Re(conj(u) center) = |u|^2 + 1.
    const double re_p = (std::norm(vb) + 1.0) / (2.0 * vb.real());
    const double im_p =
        (std::norm(vc) + 1.0 - 2.0 * vc.real() * re_p) / (2.0 * vc.imag());
    const Complex center(re_p, im_p);

    Mat2c refl_ab = Mat2c::Identity();                  // z -> conj(z)
    Mat2c refl_ac;                                      // z -> e^{2 i alpha} conj(z)
    refl_ac << Complex(std::cos(2 * alpha), std::sin(2 * alpha)), Complex(0, 0),
               Complex(0, 0), Complex(1, 0);
    Mat2c refl_bc;                                      // inversion in the BC circle
    refl_bc << center, Complex(-1, 0), Complex(1, 0), -std::conj(center);

    const Mat2c rot_a = normalize_det(refl_ac * refl_ab.conjugate());
    const Mat2c rot_b = normalize_det(refl_ab * refl_bc.conjugate());
    return {su11_to_sl2r(rot_a), su11_to_sl2r(rot_b)};
}

// Newton iteration for the J-unitary projection, M <- (M + J M^{-*} J)/2.
CMatrix project_to_unitary_group(CMatrix m) {
    const Eigen::Index n1 = m.rows();
    Eigen::MatrixXd j = Eigen::MatrixXd::Identity(n1, n1);
    j(0, 0) = -1.0;
    for (int iter = 0; iter < 25 && verify_isometry(m) > 1e-13; ++iter)
        m = 0.5 * (m + j * m.adjoint().inverse() * j);
    return m;
}

std::string triple_name(const char* family, int p, int q, int r) {
    return std::string(family) + "(" + std::to_string(p) + "," + std::to_string(q) + "," +
           std::to_string(r) + ")";
}

} // namespace

GroupSpec::GroupSpec(std::string name, int ambient_dim, std::vector<IsometryElement> generators,
                     bool integer_entries, std::optional<double> expected_delta,
                     std::string provenance)
    : name_(std::move(name)),
      ambient_dim_(ambient_dim),
      generators_(std::move(generators)),
      integer_entries_(integer_entries),
      expected_delta_(expected_delta),
      provenance_(std::move(provenance)) {
    if (ambient_dim_ < 1) throw std::invalid_argument("GroupSpec: ambient dimension must be >= 1");
    if (generators_.empty()) throw std::invalid_argument("GroupSpec: generator list is empty");
    for (const auto& g : generators_) {
        if (g.dim() != ambient_dim_)
            throw std::invalid_argument("GroupSpec: generator dimension mismatch");
        if (integer_entries_ && round_residual(g.matrix()) > 1e-12)
            throw std::invalid_argument("GroupSpec: integer_entries set but entries are not integers");
    }
}

std::vector<IsometryElement> GroupSpec::symmetrized_generators() const {
    std::vector<IsometryElement> out;
    auto push_unique = [&](const IsometryElement& g) {
        for (const auto& h : out) {
            const double scale = h.matrix().cwiseAbs().maxCoeff();
            if (projective_gap(g.matrix(), h.matrix()) <= 1e-9 * scale) return;
        }
        out.push_back(g);
    };
    for (const auto& g : generators_) push_unique(g);
    for (const auto& g : generators_) push_unique(g.inverse());
    return out;
}

CongruencePredicate::CongruencePredicate(int modulus) : modulus_(modulus) {
    if (modulus_ < 2) throw std::invalid_argument("CongruencePredicate: modulus must be >= 2");
}

bool CongruencePredicate::matches(const CMatrix& m) const {
    auto reduce = [&](double x) {
        const double r = std::round(x);
        if (std::abs(x - r) > 1e-9)
            throw std::invalid_argument("CongruencePredicate: non-integer matrix entry");
        long long v = static_cast<long long>(r) % modulus_;
        if (v < 0) v += modulus_;
        return v;
    };
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (reduce(m(i, j).imag()) != 0) return false;
            const long long want = (i == j) ? 1 : 0;
            if (reduce(m(i, j).real()) != want) return false;
        }
    return true;
}

double projective_gap(const CMatrix& m1, const CMatrix& m2) {
    if (m1.rows() != m2.rows() || m1.cols() != m2.cols())
        throw std::invalid_argument("projective_gap: shape mismatch");
    const Complex s = (m2.adjoint() * m1).trace();
    if (std::abs(s) == 0.0)
        return std::max(m1.cwiseAbs().maxCoeff(), m2.cwiseAbs().maxCoeff());
    const Complex phase = s / std::abs(s);
    return (m1 - phase * m2).cwiseAbs().maxCoeff();
}

IsometryElement sl2r_to_so21(const Eigen::Matrix2d& m) {
    if (std::abs(m.determinant() - 1.0) > 1e-9)
        throw std::invalid_argument("sl2r_to_so21: determinant must be 1");
    const double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
    // Symmetric square on X = x*I + y*diag(1,-1) + z*offdiag(1,1), X -> A X A^T,
    // which preserves det X = x^2 - y^2 - z^2.
    Eigen::Matrix3d s;
    s << (a * a + b * b + c * c + d * d) / 2, (a * a - b * b + c * c - d * d) / 2, a * b + c * d,
         (a * a + b * b - c * c - d * d) / 2, (a * a - b * b - c * c + d * d) / 2, a * b - c * d,
         a * c + b * d, a * c - b * d, a * d + b * c;
    return IsometryElement(s.cast<Complex>());
}

IsometryElement sl2r_to_su11(const Eigen::Matrix2d& m) {
    if (std::abs(m.determinant() - 1.0) > 1e-9)
        throw std::invalid_argument("sl2r_to_su11: determinant must be 1");
    const double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
    const Complex alpha((a + d) / 2, (b - c) / 2);
    const Complex beta((a - d) / 2, -(b + c) / 2);
    Mat2c out;
    out << alpha, beta, std::conj(beta), std::conj(alpha);
    return IsometryElement(out);
}

IsometryElement block_extend(const IsometryElement& g, int n) {
    const int k = g.dim();
    if (n < k) throw std::invalid_argument("block_extend: target dimension too small");
    if (n == k) return g;
    CMatrix m = CMatrix::Identity(n + 1, n + 1);
    m.topLeftCorner(k + 1, k + 1) = g.matrix();
    return IsometryElement(std::move(m));
}

GroupSpec trivial_group(int n) {
    return GroupSpec("trivial", n, {IsometryElement::identity(n)}, true, 0.0,
                     "identity generator only");
}

GroupSpec real_fuchsian_triangle(int p, int q, int r, int n) {
    if (n < 2)
        throw std::invalid_argument("real_fuchsian_triangle: needs n >= 2 for a totally real plane");
    const TriangleGenerators t = triangle_rotations(p, q, r);
    std::vector<IsometryElement> gens = {block_extend(sl2r_to_so21(t.a), n),
                                         block_extend(sl2r_to_so21(t.b), n)};
    return GroupSpec(triple_name("real-fuchsian", p, q, r), n, std::move(gens), false, 1.0,
                     "von Dyck triangle rotations on a totally real plane, curvature -1");
}

GroupSpec complex_fuchsian(int p, int q, int r, int n) {
    if (n < 1) throw std::invalid_argument("complex_fuchsian: needs n >= 1");
    const TriangleGenerators t = triangle_rotations(p, q, r);
    std::vector<IsometryElement> gens = {block_extend(sl2r_to_su11(t.a), n),
                                         block_extend(sl2r_to_su11(t.b), n)};
    return GroupSpec(triple_name("complex-fuchsian", p, q, r), n, std::move(gens), false, 2.0,
                     "the same triangle rotations on the complex geodesic {z2=...=zn=0}, "
                     "curvature -4");
}

GroupSpec cyclic_loxodromic(double t, int n) {
    if (!(t > 0.0)) throw std::invalid_argument("cyclic_loxodromic: translation length must be positive");
    if (n < 1) throw std::invalid_argument("cyclic_loxodromic: needs n >= 1");
    Mat2c m;
    m << std::cosh(t), std::sinh(t), std::sinh(t), std::cosh(t);
    std::vector<IsometryElement> gens = {block_extend(IsometryElement(m), n)};
    return GroupSpec("cyclic(" + std::to_string(t) + ")", n, std::move(gens), false, 0.0,
                     "one loxodromic generator, axis through the origin");
}

GroupSpec sanov_group(int n) {
    if (n < 2) throw std::invalid_argument("sanov_group: needs n >= 2");
    Eigen::Matrix2d u, l;
    u << 1, 2, 0, 1;
    l << 1, 0, 2, 1;
    std::vector<IsometryElement> gens = {block_extend(sl2r_to_so21(u), n),
                                         block_extend(sl2r_to_so21(l), n)};
    return GroupSpec("sanov", n, std::move(gens), true, std::nullopt,
                     "free group of rank 2, integer entries; congruence-filtration fixture");
}

GroupSpec quasi_fuchsian_perturb(const GroupSpec& spec, double eps, std::uint64_t seed) {
    if (!(eps >= 0.0) || eps > 0.5)
        throw std::invalid_argument("quasi_fuchsian_perturb: eps must lie in [0, 0.5]");
    if (eps == 0.0) return spec;

    const int n1 = spec.dim() + 1;
    Rng rng(seed);
    CMatrix g(n1, n1);
    for (Eigen::Index i = 0; i < n1; ++i)
        for (Eigen::Index j = 0; j < n1; ++j) g(i, j) = rng.complex_gaussian();
    CMatrix anti = 0.5 * (g - g.adjoint());
    CMatrix k = anti;
    k.row(0) *= -1.0;  // K = J A is J-skew-Hermitian
    k /= k.norm();

    const CMatrix conj_by = project_to_unitary_group((eps * k).exp());
    const CMatrix conj_inv = project_to_unitary_group((-eps * k).exp());
    std::vector<IsometryElement> gens = spec.generators();
    CMatrix perturbed = conj_by * gens[0].matrix() * conj_inv;
    gens[0] = IsometryElement(project_to_unitary_group(std::move(perturbed)));

    std::string note = spec.provenance() + " | perturbed by exp(eps*K), eps=" +
                       std::to_string(eps) + ", seed=" + std::to_string(seed);
    if (spec.expected_delta())
        note += "; delta > " + std::to_string(*spec.expected_delta()) + " (lower bound only)";
    return GroupSpec(spec.name() + "-perturbed", spec.dim(), std::move(gens), false, std::nullopt,
                     std::move(note));
}

CongruencePredicate congruence_filter(const GroupSpec& spec, int modulus) {
    if (!spec.integer_entries())
        throw std::invalid_argument("congruence_filter: group does not have integer entries");
    CongruencePredicate pred(modulus);
    bool nontrivial = false;
    for (const auto& g : spec.generators())
        if (!pred.matches(g.matrix())) nontrivial = true;
    if (!nontrivial)
        throw std::invalid_argument("congruence_filter: degenerate, all generators = I mod " +
                                    std::to_string(modulus));
    return pred;
}

} // namespace chyp
