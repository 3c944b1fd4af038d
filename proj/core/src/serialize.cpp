#include "entropic/serialize.hpp"

#include <cmath>
#include <limits>

#include <json.hpp>

#include "entropic/error.hpp"

using nlohmann::json;

namespace entropic {

namespace {

constexpr int kFormatVersion = 1;

json field_to_json(const ScalarField& f) {
    json arr = json::array();
    for (int i = 0; i < f.size(); ++i) {
        if (std::isinf(f[i]) && f[i] < 0)
            arr.push_back(nullptr);
        else
            arr.push_back(f[i]);
    }
    return arr;
}

ScalarField field_from_json(const json& arr) {
    ScalarField f(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i)
        f[static_cast<int>(i)] =
            arr[i].is_null() ? -std::numeric_limits<double>::infinity() : arr[i].get<double>();
    return f;
}

json parse_checked(const std::string& text, const char* kind) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error("invalid-input", std::string("malformed ") + kind + " container: " + e.what());
    }
    if (j.value("version", 0) != kFormatVersion)
        throw Error("invalid-input", std::string(kind) + " container has an unsupported version");
    return j;
}

}  // namespace

std::string serialize_solution(const SchrodingerSolution& solution) {
    json j;
    j["version"] = kFormatVersion;
    j["epsilon"] = solution.epsilon;
    j["tol"] = solution.tol;
    j["iterations"] = solution.iterations;
    j["marginal_residual"] = solution.marginal_residual;
    j["normalization_residual"] = solution.normalization_residual;
    j["log_domain"] = solution.log_domain;
    j["f"] = field_to_json(solution.f);
    j["g"] = field_to_json(solution.g);
    return j.dump();
}

SchrodingerSolution deserialize_solution(const std::string& text) {
    json j = parse_checked(text, "solution");
    SchrodingerSolution sol;
    sol.epsilon = j.at("epsilon").get<double>();
    sol.tol = j.value("tol", 0.0);
    sol.iterations = j.at("iterations").get<int>();
    sol.marginal_residual = j.at("marginal_residual").get<double>();
    sol.normalization_residual = j.at("normalization_residual").get<double>();
    sol.log_domain = j.value("log_domain", false);
    sol.f = field_from_json(j.at("f"));
    sol.g = field_from_json(j.at("g"));
    return sol;
}

std::string serialize_path(const InterpolationPath& path) {
    json j;
    j["version"] = kFormatVersion;
    j["epsilon"] = path.epsilon;
    j["time_grid"] = path.times;
    auto pack = [](const std::vector<ScalarField>& fields) {
        json arr = json::array();
        for (const auto& f : fields) arr.push_back(field_to_json(f));
        return arr;
    };
    j["f"] = pack(path.f);
    j["g"] = pack(path.g);
    j["rho"] = pack(path.rho);
    j["phi"] = pack(path.phi);
    j["psi"] = pack(path.psi);
    j["theta"] = pack(path.theta);
    return j.dump();
}

InterpolationPath deserialize_path(const std::string& text) {
    json j = parse_checked(text, "path");
    InterpolationPath path;
    path.epsilon = j.at("epsilon").get<double>();
    path.times = j.at("time_grid").get<std::vector<double>>();
    auto unpack = [](const json& arr) {
        std::vector<ScalarField> fields;
        fields.reserve(arr.size());
        for (const auto& f : arr) fields.push_back(field_from_json(f));
        return fields;
    };
    path.f = unpack(j.at("f"));
    path.g = unpack(j.at("g"));
    path.rho = unpack(j.at("rho"));
    path.phi = unpack(j.at("phi"));
    path.psi = unpack(j.at("psi"));
    path.theta = unpack(j.at("theta"));
    return path;
}

}  // namespace entropic
