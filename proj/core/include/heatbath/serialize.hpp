#pragma once

#include <nlohmann/json.hpp>

#include "heatbath/coupling.hpp"
#include "heatbath/lattice.hpp"

namespace heatbath {

using json = nlohmann::json;

json to_json(const Polynomial& p);
json to_json(const RationalFunction& r);
json to_json(const Matrix& m);
json to_json(const Vector& v);
json to_json(const RowVector& v);
/// Each value as a [re, im] pair.
json to_json(const std::vector<Complex>& values);
json to_json(const FosterSpec& spec);
json to_json(const LosslessRealization& r);
json to_json(const CertificateReport& r);

/// {gamma_eigs, gamma_bar_eigs, K_num, K_den, allpass_residual,
///  mirror_residual} plus K in text and readable form.
json coupling_report(const CoupledModelPair& pair);

}  // namespace heatbath
