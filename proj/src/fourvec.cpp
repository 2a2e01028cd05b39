#include "gksl/fourvec.hpp"

namespace gksl {

namespace {
constexpr double kUnitAxisTol = 1e-9;

void require_unit(const Vec3& axis) {
    if (std::abs(axis.norm() - 1.0) > kUnitAxisTol)
        throw std::invalid_argument("axis must be unit-normalized");
}
}  // namespace

Vec3 Vec3::normalized() const {
    const double n = norm();
    if (n == 0.0) throw std::invalid_argument("cannot normalize zero vector");
    return {x / n, y / n, z / n};
}

FourVector on_shell(const Vec3& p, double mass) {
    return {std::sqrt(p.dot(p) + mass * mass), p};
}

FourVector boost(const FourVector& v, double rapidity, const Vec3& axis) {
    require_unit(axis);
    if (rapidity == 0.0) return v;
    const double ch = std::cosh(rapidity);
    const double sh = std::sinh(rapidity);
    const Vec3 p = v.spatial();
    const double p_par = p.dot(axis);
    const Vec3 p_perp = p - axis * p_par;
    const double t_new = ch * v.t + sh * p_par;
    const double par_new = sh * v.t + ch * p_par;
    return {t_new, p_perp + axis * par_new};
}

FourVector rotate(const FourVector& v, double angle, const Vec3& axis) {
    require_unit(axis);
    const Vec3 p = v.spatial();
    const double c = std::cos(angle), s = std::sin(angle);
    const Vec3 rotated = p * c + axis.cross(p) * s + axis * (axis.dot(p) * (1.0 - c));
    return {v.t, rotated};
}

FourVector boost_from_rest_frame(const FourVector& k_cm, const FourVector& total) {
    const double m2 = -square(total);
    if (m2 <= 0.0) throw std::invalid_argument("total momentum must be timelike");
    const Vec3 pv = total.spatial();
    const double pnorm = pv.norm();
    if (pnorm == 0.0) return k_cm;
    const double m = std::sqrt(m2);
    const double gamma = total.t / m;
    const Vec3 beta_hat = pv * (1.0 / pnorm);
    const double beta = pnorm / total.t;
    const Vec3 k = k_cm.spatial();
    const double k_par = k.dot(beta_hat);
    const Vec3 k_perp = k - beta_hat * k_par;
    const double t_new = gamma * (k_cm.t + beta * k_par);
    const double par_new = gamma * (k_par + beta * k_cm.t);
    return {t_new, k_perp + beta_hat * par_new};
}

FourVector boost_to_rest_frame(const FourVector& k_lab, const FourVector& total) {
    const FourVector reversed(total.t, -total.spatial());
    return boost_from_rest_frame(k_lab, reversed);
}

Mandelstam mandelstam(const FourVector& p1, const FourVector& p2,
                      const FourVector& pbar1, const FourVector& pbar2) {
    return {square(p1 + p2), square(p1 - pbar1), square(p1 - pbar2)};
}

}  // namespace gksl
