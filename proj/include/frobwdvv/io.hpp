#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "frobwdvv/mtps.hpp"
#include "frobwdvv/symfun.hpp"

namespace frobwdvv {

using json = nlohmann::json;

/// Accepts a JSON string "p/q" or an integer.
Rational rationalFromJson(const json& j);
json rationalToJson(const Rational& q);

/// {"terms":[{"coeff":"p/q","radical":n,"powers":{},"logs":{},"exps":{}}]}; a
/// coefficient with several radicals is written as several terms.
json closedFormToJson(const ClosedForm& f, const std::vector<std::string>& names);
ClosedForm closedFormFromJson(const json& j, const std::vector<std::string>& names);

json qradToJson(const QRad& x);

template <class S>
json seriesToJson(const TruncSeries<S>& s) {
    json j;
    j["order"] = toString(s.order());
    j["weights"] = json::array();
    for (const auto& w : s.weights()) j["weights"].push_back(toString(w));
    j["center"] = json::array();
    for (const auto& c : s.center()) j["center"].push_back(ScalarOps<S>::str(c));
    j["coeffs"] = json::array();
    for (const auto& [k, c] : s.coeffs()) j["coeffs"].push_back({{"index", k}, {"value", ScalarOps<S>::str(c)}});
    return j;
}

/// Write-then-rename so readers never see a partial file.
void writeFileAtomic(const std::string& path, const std::string& content);
std::string readFile(const std::string& path);

}  // namespace frobwdvv
