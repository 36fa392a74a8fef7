#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace frobwdvv {

struct Check {
    std::string name;
    bool pass = false;
    double maxResidual = 0.0;
    std::string detail;
};

/// Outcome of a verification pipeline; pass() iff every check passed.
struct Report {
    std::string command;
    double tolerance = 0.0;
    std::vector<Check> checks;
    nlohmann::json conventions = nlohmann::json::object();
    nlohmann::json data = nlohmann::json::object();

    void add(std::string name, bool pass, double residual = 0.0, std::string detail = {});
    void merge(const Report& other, const std::string& prefix = {});
    bool pass() const;
    nlohmann::json toJson() const;
    std::string toText() const;
};

}  // namespace frobwdvv
