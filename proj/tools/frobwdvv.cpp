#include <cstdlib>
#include <future>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "frobwdvv/calibration.hpp"
#include "frobwdvv/errors.hpp"
#include "frobwdvv/genus_one.hpp"
#include "frobwdvv/io.hpp"
#include "frobwdvv/isomonodromy.hpp"
#include "frobwdvv/legendre.hpp"
#include "frobwdvv/recursions.hpp"

using namespace frobwdvv;

namespace {

struct RunConfig {
    std::string command;
    std::string spec;
    std::string spec2;
    std::string compare;
    std::string name;
    std::vector<std::string> params;
    int kappa = 2;
    int order = 8;
    int mMax = 4;
    int maxIndex = 4;
    double tol = 1e-8;
    std::string out;
    std::string format = "json";
    std::string point, point2, signs;
    double phi = 3.0 * 3.14159265358979323846 / 4.0;
    bool hamiltonians = false;
};

std::vector<std::string> splitCommas(const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(item);
    return parts;
}

std::map<std::string, Rational> parseParams(const std::vector<std::string>& raw) {
    std::map<std::string, Rational> out;
    for (const auto& p : raw) {
        const auto eq = p.find('=');
        if (eq == std::string::npos) throw SpecParseError("--param expects name=value, got '" + p + "'");
        out[p.substr(0, eq)] = parseRational(p.substr(eq + 1));
    }
    return out;
}

std::vector<Rational> rationalPoint(const std::string& s, std::size_t n) {
    std::vector<Rational> pt;
    for (const auto& x : splitCommas(s)) pt.push_back(parseRational(x));
    if (s.empty()) pt.assign(n, Rational(0));
    if (pt.size() != n) throw SpecParseError("point needs " + std::to_string(n) + " coordinates");
    return pt;
}

std::vector<cplx> numericPoint(const std::string& s, std::size_t n) {
    std::vector<cplx> pt;
    for (const auto& x : splitCommas(s)) pt.emplace_back(std::stod(x));
    if (s.empty()) pt.assign(n, 0.0);
    if (pt.size() != n) throw SpecParseError("point needs " + std::to_string(n) + " coordinates");
    return pt;
}

std::vector<int> parseSigns(const std::string& s) {
    std::vector<int> out;
    for (const auto& x : splitCommas(s)) out.push_back(std::stoi(x) < 0 ? -1 : 1);
    return out;
}

int threadCap() {
    const char* env = std::getenv("FROBWDVV_THREADS");
    if (!env) return 0;
    return std::max(1, std::atoi(env));
}

FrobeniusSpec loadWithContext(const std::string& path, const std::map<std::string, Rational>& params) {
    try {
        return loadSpec(path, params);
    } catch (const std::exception& e) {
        throw SpecParseError(path + ": " + e.what());
    }
}

nlohmann::json pointJson(const std::vector<cplx>& pt) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& x : pt) j.push_back(x.real());
    return j;
}

// --- subcommands ------------------------------------------------------------

Report runWdvv(const RunConfig& cfg) {
    const FrobeniusSpec s = loadWithContext(cfg.spec, parseParams(cfg.params));
    Report rep = checkWDVV(s, buildTensors(s));
    rep.command = "wdvv-check";
    rep.data["spec"] = s.name;
    return rep;
}

Report runCalibrate(const RunConfig& cfg) {
    const FrobeniusSpec s = loadWithContext(cfg.spec, parseParams(cfg.params));
    const Calibration cal = solveCalibration(s, cfg.mMax);
    Report rep;
    rep.command = "calibrate";
    rep.merge(checkCalibration(cal));
    const TwoPointTable om = twoPoint(cal);
    rep.merge(checkTwoPoint(cal, om), "omega.");
    rep.merge(checkHomogeneity(cal, om), "omega.");
    nlohmann::json theta = nlohmann::json::object();
    for (std::size_t a = 0; a < s.n(); ++a) {
        nlohmann::json col = nlohmann::json::array();
        for (int m = 0; m <= cal.mMax; ++m) col.push_back(toString(cal.at(static_cast<int>(a), m), s.variables));
        theta[s.variables[a]] = col;
    }
    rep.data["theta"] = theta;
    rep.conventions["m_max"] = cfg.mMax;
    return rep;
}

LegendreResult legendreFor(const RunConfig& cfg, const FrobeniusSpec& s) {
    const auto pt = rationalPoint(cfg.point, s.n());
    return transform(s, cfg.kappa - 1, std::vector<QRad>(pt.begin(), pt.end()), cfg.order);
}

Report runLegendre(const RunConfig& cfg) {
    const auto params = parseParams(cfg.params);
    const FrobeniusSpec s = loadWithContext(cfg.spec, params);
    const LegendreResult r = legendreFor(cfg, s);
    Report rep;
    rep.command = "legendre";
    rep.merge(checkTransform(r));
    rep.merge(verifyEulerHat(r), "euler.");
    rep.merge(roundTrip(r), "round_trip.");
    if (!cfg.compare.empty()) {
        const FrobeniusSpec cand = loadWithContext(cfg.compare, params);
        rep.merge(compareHatPotential(r, cand.potential, cfg.order), "compare.");
    }
    rep.data = legendreJson(r, Report{});
    rep.data.erase("checks");
    rep.data["hat_center"] = nlohmann::json::array();
    for (const auto& c : r.series.hatCenter()) rep.data["hat_center"].push_back(toString(c));
    rep.data["hat_potential"] = seriesToJson(r.hatPotential());
    rep.conventions["kappa"] = cfg.kappa;
    rep.conventions["order"] = cfg.order;
    rep.conventions["hat_potential"] = "series in offsets about the hat center, constant and linear parts dropped";
    return rep;
}

Report runVerifyOmega(const RunConfig& cfg) {
    const FrobeniusSpec s = loadWithContext(cfg.spec, parseParams(cfg.params));
    const LegendreResult r = legendreFor(cfg, s);
    const Calibration cal = solveCalibration(s, cfg.mMax);
    const HatCalibration hat = transportCalibration(r, cal);
    const HatTwoPoint om = hatTwoPoint(r, hat);
    Report rep;
    rep.command = "verify-omega";
    rep.merge(checkHatCalibration(r, cal, hat), "calibration.");
    rep.merge(verifyOmegaTransport(r, twoPoint(cal), om), "transport.");
    rep.merge(checkHatHomogeneity(r, om), "homogeneity.");
    rep.conventions["kappa"] = cfg.kappa;
    rep.conventions["order"] = cfg.order;
    rep.conventions["m_max"] = cfg.mMax;
    return rep;
}

Report runRecursionCmd(const RunConfig& cfg) {
    const RecursionOutput out = runRecursion(cfg.name, cfg.maxIndex);
    Report rep = out.report;
    rep.command = "recursion";
    nlohmann::json values = nlohmann::json::array();
    for (const auto& [label, v] : out.values) values.push_back({label, toString(v)});
    rep.data["name"] = cfg.name;
    rep.data["values"] = values;
    rep.conventions["max"] = cfg.maxIndex;
    return rep;
}

Report runGenusOne(const RunConfig& cfg) {
    const FrobeniusSpec s = loadWithContext(cfg.spec, parseParams(cfg.params));
    Report rep = verifyGenusOneIdentity(genusOneCase(s, cfg.kappa - 1));
    rep.command = "genus1-check";
    rep.conventions["kappa"] = cfg.kappa;
    return rep;
}

struct MonodromyRun {
    FrobeniusSpec spec;
    SemisimplePoint ss;
    MonodromyData md;
};

MonodromyRun monodromyFor(const FrobeniusSpec& s, const std::string& point, const std::string& signs,
                          const RunConfig& cfg) {
    StokesOptions opt;
    opt.tol = cfg.tol;
    const SemisimplePoint ss = semisimpleAt(s, numericPoint(point, s.n()), parseSigns(signs));
    return {s, ss, stokesAndConnection(s, ss, {cfg.phi, 0.05}, opt)};
}

Report runMonodromy(const RunConfig& cfg) {
    const auto params = parseParams(cfg.params);
    const FrobeniusSpec s = loadWithContext(cfg.spec, params);
    const MonodromyRun run = monodromyFor(s, cfg.point, cfg.signs, cfg);
    Report rep;
    rep.command = "monodromy";
    rep.merge(checkSemisimple(run.ss), "frame.");
    rep.add("matching", run.md.residual < cfg.tol, run.md.residual, "spread between matching radii");
    rep.add("pi_minus", run.md.piMinusResidual < cfg.tol, run.md.piMinusResidual, "Y_left = Y_right S^T");
    rep.merge(monodromyIdentities(run.md, cfg.tol), "identities.");
    rep.data = monodromyJson(run.md);
    rep.data["point"] = pointJson(run.ss.v);
    if (s.n() == 2) {
        const cplx inv = stokesInvariant2(run.md.S);
        rep.data["stokes_invariant"] = {inv.real(), inv.imag()};
    }
    if (!cfg.spec2.empty()) {
        const FrobeniusSpec hs = loadWithContext(cfg.spec2, params);
        const int kappa = cfg.kappa - 1;
        rep.merge(verifyLegendreFrameInvariance(s, hs, kappa, run.ss.v, cfg.tol), "legendre_frame.");
        const SemisimplePoint h = hatSemisimpleAt(run.ss, s, hs, kappa);
        StokesOptions opt;
        opt.tol = cfg.tol;
        const MonodromyData mh = stokesAndConnection(hs, h, {cfg.phi, 0.05}, opt);
        const double dS = (mh.S - run.md.S).cwiseAbs().maxCoeff(), dC = (mh.C - run.md.C).cwiseAbs().maxCoeff();
        rep.add("hat.S_equal", dS < cfg.tol, dS);
        rep.add("hat.C_equal", dC < cfg.tol, dC);
        rep.data["hat"] = monodromyJson(mh);
        rep.data["hat"]["point"] = pointJson(h.v);
    }
    if (cfg.hamiltonians) rep.merge(hamiltoniansAndClosedness(s, run.ss.v, 1e-4, 1e-6), "hamiltonians.");
    rep.conventions = run.md.conventions;
    return rep;
}

Report runTensor(const RunConfig& cfg) {
    const auto params = parseParams(cfg.params);
    const FrobeniusSpec a = loadWithContext(cfg.spec, params), b = loadWithContext(cfg.spec2, params);
    const auto policy = threadCap() == 1 ? std::launch::deferred : std::launch::async;
    auto fa = std::async(policy, [&] { return monodromyFor(a, cfg.point, "", cfg); });
    auto fb = std::async(policy, [&] { return monodromyFor(b, cfg.point2, "", cfg); });
    const MonodromyRun ra = fa.get(), rb = fb.get();
    const MonodromyData t = tensorMonodromy(ra.md, rb.md);
    Report rep;
    rep.command = "tensor-monodromy";
    rep.merge(monodromyIdentities(ra.md, cfg.tol), "first.");
    rep.merge(monodromyIdentities(rb.md, cfg.tol), "second.");
    rep.merge(monodromyIdentities(t, cfg.tol), "tensor.");
    rep.data = monodromyJson(t);
    rep.conventions = t.conventions;
    return rep;
}

std::string csvEscape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string o = "\"";
    for (char c : s) o += c == '"' ? std::string("\"\"") : std::string(1, c);
    return o + "\"";
}

std::string render(const Report& rep, const std::string& format) {
    if (format == "json") return rep.toJson().dump(2) + "\n";
    if (format == "text") {
        std::string s = rep.toText();
        if (rep.data.contains("values"))
            for (const auto& row : rep.data["values"]) s += "  " + row[0].get<std::string>() + " = " + row[1].get<std::string>() + "\n";
        return s;
    }
    std::ostringstream os;
    if (rep.data.contains("values")) {
        os << "label,value\n";
        for (const auto& row : rep.data["values"]) os << csvEscape(row[0]) << "," << csvEscape(row[1]) << "\n";
        return os.str();
    }
    os << "name,pass,max_residual,detail\n";
    for (const auto& c : rep.checks)
        os << csvEscape(c.name) << "," << (c.pass ? "true" : "false") << "," << c.maxResidual << "," << csvEscape(c.detail)
           << "\n";
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Frobenius manifolds: WDVV, Legendre-type transformations, genus one, monodromy"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--tol", cfg.tol, "tolerance for numeric checks")->capture_default_str();
        sub->add_option("-o,--out", cfg.out, "write the report here instead of stdout");
        sub->add_option("--format", cfg.format, "json, text or csv")
            ->check(CLI::IsMember({"json", "text", "csv"}))
            ->capture_default_str();
        sub->add_option("--param", cfg.params, "family parameter name=p/q (repeatable)");
    };
    auto withSpec = [&](CLI::App* sub) {
        sub->add_option("spec", cfg.spec, "spec JSON file")->required()->check(CLI::ExistingFile);
        common(sub);
    };

    auto* wdvv = app.add_subcommand("wdvv-check", "WDVV, unity and metric checks on a spec");
    withSpec(wdvv);

    auto* cal = app.add_subcommand("calibrate", "solve the calibration and check the two-point functions");
    withSpec(cal);
    cal->add_option("--m-max", cfg.mMax, "calibration depth")->capture_default_str();

    auto* leg = app.add_subcommand("legendre", "Legendre-type transformation about a point");
    withSpec(leg);
    leg->add_option("--kappa", cfg.kappa, "direction, 1-based")->capture_default_str();
    leg->add_option("--order", cfg.order, "series order")->capture_default_str();
    leg->add_option("--point", cfg.point, "center, comma separated rationals (default origin)");
    leg->add_option("--compare", cfg.compare, "spec whose potential should match modulo quadratic terms")
        ->check(CLI::ExistingFile);

    auto* om = app.add_subcommand("verify-omega", "transport calibration and two-point functions");
    withSpec(om);
    om->add_option("--kappa", cfg.kappa, "direction, 1-based")->capture_default_str();
    om->add_option("--order", cfg.order, "series order")->capture_default_str();
    om->add_option("--point", cfg.point, "center, comma separated rationals (default origin)");
    om->add_option("--m-max", cfg.mMax, "calibration depth")->capture_default_str();

    auto* rec = app.add_subcommand("recursion", "run a named coefficient recursion");
    rec->add_option("name", cfg.name, "recursion name")->required()->check(CLI::IsMember(recursionNames()));
    rec->add_option("--max", cfg.maxIndex, "largest index")->capture_default_str();
    common(rec);

    auto* g1 = app.add_subcommand("genus1-check", "genus-one free energy identity");
    withSpec(g1);
    g1->add_option("--kappa", cfg.kappa, "direction, 1-based")->capture_default_str();

    auto* mono = app.add_subcommand("monodromy", "Stokes and central connection matrices at a point");
    withSpec(mono);
    mono->add_option("--point", cfg.point, "flat coordinates, comma separated (default origin)");
    mono->add_option("--phi", cfg.phi, "angle of l_+")->capture_default_str();
    mono->add_option("--signs", cfg.signs, "sign choices for sqrt(eta_ii), comma separated");
    mono->add_option("--hat", cfg.spec2, "S_kappa spec to compare against")->check(CLI::ExistingFile);
    mono->add_option("--kappa", cfg.kappa, "direction for --hat, 1-based")->capture_default_str();
    mono->add_flag("--hamiltonians", cfg.hamiltonians, "also check closedness of sum H_i du_i");

    auto* ten = app.add_subcommand("tensor-monodromy", "monodromy data of a tensor product");
    withSpec(ten);
    ten->add_option("spec2", cfg.spec2, "second factor")->required()->check(CLI::ExistingFile);
    ten->add_option("--point", cfg.point, "point on the first factor");
    ten->add_option("--point2", cfg.point2, "point on the second factor");
    ten->add_option("--phi", cfg.phi, "angle of l_+")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        Report rep;
        if (*wdvv) rep = runWdvv(cfg);
        else if (*cal) rep = runCalibrate(cfg);
        else if (*leg) rep = runLegendre(cfg);
        else if (*om) rep = runVerifyOmega(cfg);
        else if (*rec) rep = runRecursionCmd(cfg);
        else if (*g1) rep = runGenusOne(cfg);
        else if (*mono) rep = runMonodromy(cfg);
        else rep = runTensor(cfg);
        rep.tolerance = cfg.tol;
        if (!cfg.spec.empty()) rep.conventions["spec"] = cfg.spec;
        if (!cfg.params.empty()) rep.conventions["params"] = cfg.params;
        const std::string text = render(rep, cfg.format);
        if (cfg.out.empty()) std::cout << text;
        else writeFileAtomic(cfg.out, text);
        return rep.pass() ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "frobwdvv: " << (cfg.spec.empty() ? "" : cfg.spec + ": ") << e.what() << "\n";
        return 2;
    }
}
