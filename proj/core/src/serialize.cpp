#include "heatbath/serialize.hpp"

namespace heatbath {

json to_json(const Polynomial& p) { return json(std::vector<double>(p.coeffs().begin(), p.coeffs().end())); }

json to_json(const RationalFunction& r) {
  return {{"num", to_json(r.num())}, {"den", to_json(r.den())}, {"text", to_text(r)},
          {"pretty", to_pretty(r)}};
}

json to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const Vector& v) { return json(std::vector<double>(v.begin(), v.end())); }

json to_json(const RowVector& v) { return json(std::vector<double>(v.begin(), v.end())); }

json to_json(const std::vector<Complex>& values) {
  json out = json::array();
  for (const Complex& z : values) out.push_back({z.real(), z.imag()});
  return out;
}

json to_json(const FosterSpec& spec) {
  json tanks = json::array();
  for (const Tank& t : spec.tanks) tanks.push_back({{"k", t.k}, {"omega", t.omega}});
  return {{"k0", spec.k0}, {"tanks", tanks}, {"text", to_text(spec)}};
}

json to_json(const LosslessRealization& r) {
  return {{"A", to_json(r.ss.A)}, {"b", to_json(r.ss.b)}, {"c", to_json(r.ss.c)},
          {"d", r.ss.d},          {"omega", to_json(r.omega)}};
}

json to_json(const CertificateReport& r) {
  return {{"lyapunov_residual", r.lyapunov_residual},
          {"port_residual", r.port_residual},
          {"max_abs_real_eig", r.max_abs_real_eig},
          {"controllability_margin", r.controllability_margin},
          {"observability_margin", r.observability_margin},
          {"omega_positive", r.omega_positive},
          {"valid", r.valid()}};
}

json coupling_report(const CoupledModelPair& pair) {
  const std::vector<Complex> eg = eigenvalues(pair.gamma);
  const std::vector<Complex> egb = eigenvalues(pair.gamma_bar);
  return {{"gamma_eigs", to_json(eg)},
          {"gamma_bar_eigs", to_json(egb)},
          {"K_num", to_json(pair.K.num())},
          {"K_den", to_json(pair.K.den())},
          {"K", to_text(pair.K)},
          {"K_pretty", to_pretty(pair.K)},
          {"allpass_residual", allpass_grid_residual(pair.K)},
          {"mirror_residual", mirror_residual(eg, egb)},
          {"k_crosscheck", pair.k_crosscheck}};
}

}  // namespace heatbath
