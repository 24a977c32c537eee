#pragma once

#include "qadd/matcore.hpp"

#include <json.hpp>

#include <string>

namespace qadd::io {

/// Lossless JSON encoding of a complex matrix:
/// {"dim": d, "re": [d*d row-major], "im": [d*d row-major]}.
nlohmann::json matrix_to_json(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd matrix_from_json(const nlohmann::json& j);

/// Reads a density matrix from a state file. Traces within 1e-6 of one are
/// renormalized; anything else (parse failure, non-Hermitian, non-PSD) throws
/// std::runtime_error with a diagnostic.
DensityMatrix read_density(const std::string& path);
void write_density(const std::string& path, const DensityMatrix& rho);

HermitianObservable read_observable(const std::string& path);

/// Shortest text with 17 significant digits, used by all CSV output.
std::string format_float(double v);

}  // namespace qadd::io
