#include "frobwdvv/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace frobwdvv {

void Report::add(std::string name, bool pass, double residual, std::string detail) {
    checks.push_back({std::move(name), pass, residual, std::move(detail)});
}

void Report::merge(const Report& other, const std::string& prefix) {
    for (const auto& c : other.checks) checks.push_back({prefix + c.name, c.pass, c.maxResidual, c.detail});
}

bool Report::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

nlohmann::json Report::toJson() const {
    nlohmann::json j;
    j["schema"] = "frobwdvv/1";
    j["command"] = command;
    j["tolerance"] = tolerance;
    j["pass"] = pass();
    j["conventions"] = conventions;
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks) {
        nlohmann::json cj{{"name", c.name}, {"pass", c.pass}, {"max_residual", c.maxResidual}};
        if (!std::isfinite(c.maxResidual)) cj["max_residual"] = nullptr;
        if (!c.detail.empty()) cj["detail"] = c.detail;
        j["checks"].push_back(cj);
    }
    if (!data.empty()) j["data"] = data;
    return j;
}

std::string Report::toText() const {
    std::ostringstream os;
    os << command << ": " << (pass() ? "PASS" : "FAIL") << "\n";
    for (const auto& c : checks) {
        os << "  [" << (c.pass ? "ok" : "FAIL") << "] " << c.name;
        if (c.maxResidual != 0.0) os << "  residual=" << c.maxResidual;
        if (!c.detail.empty()) os << "  " << c.detail;
        os << "\n";
    }
    return os.str();
}

}  // namespace frobwdvv
