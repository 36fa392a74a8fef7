#include "frobwdvv/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "frobwdvv/errors.hpp"

namespace frobwdvv {

Rational rationalFromJson(const json& j) {
    if (j.is_string()) return parseRational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    throw SpecParseError("expected a rational string or integer, got " + j.dump());
}

json rationalToJson(const Rational& q) { return toString(q); }

json qradToJson(const QRad& x) {
    json a = json::array();
    for (const auto& [n, c] : x.terms()) a.push_back({{"coeff", toString(c)}, {"radical", n}});
    return a;
}

namespace {

int varIndex(const std::string& name, const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<int>(i);
    throw SpecParseError("unknown variable '" + name + "'");
}

}  // namespace

json closedFormToJson(const ClosedForm& f, const std::vector<std::string>& names) {
    json terms = json::array();
    for (const auto& [m, c] : f.terms()) {
        json base;
        if (!m.powers.empty()) {
            json p = json::object();
            for (const auto& [v, e] : m.powers) p[names.at(v)] = toString(e);
            base["powers"] = p;
        }
        if (!m.logs.empty()) {
            json p = json::object();
            for (const auto& [v, k] : m.logs) p[names.at(v)] = k;
            base["logs"] = p;
        }
        if (!m.exps.empty()) {
            json p = json::object();
            for (const auto& [v, e] : m.exps) p[names.at(v)] = toString(e);
            base["exps"] = p;
        }
        for (const auto& [n, r] : c.terms()) {
            json t = base;
            t["coeff"] = toString(r);
            if (n != 1) t["radical"] = n;
            terms.push_back(t);
        }
    }
    return {{"terms", terms}};
}

ClosedForm closedFormFromJson(const json& j, const std::vector<std::string>& names) {
    if (!j.is_object() || !j.contains("terms") || !j["terms"].is_array())
        throw SpecParseError("closed form must be an object with a 'terms' array");
    ClosedForm f;
    for (const auto& t : j["terms"]) {
        GenMonomial m;
        if (t.contains("powers"))
            for (const auto& [k, val] : t["powers"].items()) {
                int v = varIndex(k, names);
                m.setPower(v, m.power(v) + rationalFromJson(val));
            }
        if (t.contains("logs"))
            for (const auto& [k, val] : t["logs"].items()) {
                int v = varIndex(k, names);
                if (!val.is_number_integer() || val.get<int>() < 0)
                    throw SpecParseError("log powers must be nonnegative integers");
                m.setLog(v, m.logPower(v) + val.get<int>());
            }
        if (t.contains("exps"))
            for (const auto& [k, val] : t["exps"].items()) {
                int v = varIndex(k, names);
                m.setExp(v, m.expCoef(v) + rationalFromJson(val));
            }
        Rational c = t.contains("coeff") ? rationalFromJson(t["coeff"]) : Rational(1);
        QRad coef(c);
        if (t.contains("radical")) {
            long n = t["radical"].get<long>();
            if (n <= 0) throw SpecParseError("radical must be a positive integer");
            coef = QRad::sqrt(Rational(n)) * QRad(c);
        }
        f.addTerm(m, coef);
    }
    return f;
}

void writeFileAtomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp + " for writing");
        out << content;
        if (!out) throw Error("write to " + tmp + " failed");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw Error("cannot rename " + tmp + " to " + path);
}

std::string readFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SpecParseError("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace frobwdvv
