#include "sauv/model_io.hpp"

#include "sauv/time_expr.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sauv {

namespace {

using nlohmann::json;

cd entry(const json& j)
{
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_string()) {
        TimeExpr q = TimeExpr::parse(j.get<std::string>());
        if (!q.is_constant()) throw std::invalid_argument("matrix entry must be a rational constant");
        return {to_double(q.constant()), 0.0};
    }
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw std::invalid_argument("matrix entry must be a number or [re, im]");
}

Mat matrix(const json& j, int expect_rows = -1)
{
    if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix must be a nonempty array of rows");
    int rows = static_cast<int>(j.size());
    int cols = static_cast<int>(j[0].size());
    if (expect_rows >= 0 && (rows != expect_rows || cols != expect_rows))
        throw std::invalid_argument("matrix must be " + std::to_string(expect_rows) + " x " + std::to_string(expect_rows));
    Mat m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (!j[i].is_array() || static_cast<int>(j[i].size()) != cols)
            throw std::invalid_argument("matrix rows must have equal length");
        for (int k = 0; k < cols; ++k) m(i, k) = entry(j[i][k]);
    }
    return m;
}

MatModel from_json(const json& j)
{
    int n = j.at("dimension").get<int>();
    if (n < 1) throw std::invalid_argument("dimension must be positive");
    Mat state = matrix(j.at("state"), n);
    const json& g = j.at("generator");
    std::string kind = g.at("kind").get<std::string>();
    Mat L;
    if (kind == "depolarizing") {
        L = g.value("rate", 1.0) * depolarizing_generator(state);
    } else if (kind == "gks") {
        std::vector<Mat> kraus;
        for (const auto& v : g.at("kraus")) kraus.push_back(matrix(v, n));
        Mat k = g.contains("k") ? matrix(g.at("k"), n)
                                : gks_unital_k(kraus, g.contains("hamiltonian") ? matrix(g.at("hamiltonian"), n)
                                                                                 : Mat::Zero(n, n));
        L = gks_generator(kraus, k);
    } else if (kind == "superoperator") {
        L = matrix(g.at("matrix"), n * n);
    } else if (kind == "transpose") {
        L = transpose_superop(n) - identity_superop(n);
    } else {
        throw std::invalid_argument("unknown generator kind '" + kind + "'");
    }
    MatModel m(state, L, kind);
    bind_random_symbols(m, j.value("binding_seed", std::uint64_t{1}));
    if (j.contains("bindings"))
        for (const auto& [name, v] : j.at("bindings").items()) m.bind(name, matrix(v, n));
    return m;
}

}  // namespace

MatModel parse_model(const std::string& json_text) { return from_json(json::parse(json_text)); }

MatModel load_model(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file " + path);
    return from_json(json::parse(in));
}

Mat parse_matrix(const std::string& json_text) { return matrix(json::parse(json_text)); }

std::string matrix_to_json(const Mat& m, int precision)
{
    std::ostringstream os;
    os.precision(precision);
    os << '[';
    for (int i = 0; i < m.rows(); ++i) {
        if (i) os << ", ";
        os << '[';
        for (int k = 0; k < m.cols(); ++k) {
            if (k) os << ", ";
            os << '[' << m(i, k).real() << ", " << m(i, k).imag() << ']';
        }
        os << ']';
    }
    os << ']';
    return os.str();
}

}  // namespace sauv
