#include "qadd/io.hpp"

#include <cstdio>
#include <fstream>

namespace qadd::io {

nlohmann::json matrix_to_json(const Eigen::MatrixXcd& m) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("matrix_to_json: matrix must be square");
    }
    const int d = static_cast<int>(m.rows());
    std::vector<double> re, im;
    re.reserve(d * d);
    im.reserve(d * d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            re.push_back(m(i, j).real());
            im.push_back(m(i, j).imag());
        }
    }
    return nlohmann::json{{"dim", d}, {"re", re}, {"im", im}};
}

Eigen::MatrixXcd matrix_from_json(const nlohmann::json& j) {
    if (!j.contains("dim") || !j.contains("re") || !j.contains("im")) {
        throw std::runtime_error("state file must contain dim, re, im");
    }
    const int d = j.at("dim").get<int>();
    if (d < 1) {
        throw std::runtime_error("state file has non-positive dimension");
    }
    const auto re = j.at("re").get<std::vector<double>>();
    const auto im = j.at("im").get<std::vector<double>>();
    if (re.size() != static_cast<size_t>(d) * d || im.size() != static_cast<size_t>(d) * d) {
        throw std::runtime_error("state file arrays do not match dim^2");
    }
    Eigen::MatrixXcd m(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j2 = 0; j2 < d; ++j2) {
            m(i, j2) = cxd(re[i * d + j2], im[i * d + j2]);
        }
    }
    return m;
}

namespace {

nlohmann::json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open file: " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

}  // namespace

DensityMatrix read_density(const std::string& path) {
    Eigen::MatrixXcd m = matrix_from_json(parse_file(path));
    const double tr = m.trace().real();
    if (std::abs(tr - 1.0) > 1e-6) {
        throw std::runtime_error("state file trace deviates from 1 by more than 1e-6");
    }
    m /= tr;
    try {
        return DensityMatrix(m);
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("state file is not a density matrix: ") + e.what());
    }
}

void write_density(const std::string& path, const DensityMatrix& rho) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write file: " + path);
    }
    out << matrix_to_json(rho.matrix()).dump(2) << "\n";
}

HermitianObservable read_observable(const std::string& path) {
    Eigen::MatrixXcd m = matrix_from_json(parse_file(path));
    try {
        return HermitianObservable(m);
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("observable file is not Hermitian: ") + e.what());
    }
}

std::string format_float(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace qadd::io
