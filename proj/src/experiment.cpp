#include "clmf/experiment.hpp"
#include "clmf/bounds.hpp"
#include "clmf/finite_system.hpp"
#include "clmf/initial_data.hpp"
#include "clmf/interaction.hpp"
#include "clmf/limit_dynamics.hpp"
#include "clmf/partial_order.hpp"
#include "clmf/particle_sim.hpp"
#include "clmf/second_moment.hpp"
#include "clmf/spectral.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace clmf {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";

std::string join(const std::vector<std::string>& v)
{
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : "; ") + x;
    return s;
}

int default_radius(int k)
{
    if (k <= 2) return 64;
    if (k == 3) return 16;
    return 8;
}

// Collects schema problems while filling defaults.
class Resolver {
public:
    Resolver(const json& in, json& out) : in_(in), out_(out) {}

    template <class T>
    T take(const std::string& key, T fallback)
    {
        if (!in_.contains(key)) {
            out_[key] = fallback;
            return fallback;
        }
        try {
            T v = in_.at(key).get<T>();
            out_[key] = v;
            return v;
        } catch (const std::exception&) {
            problems.push_back("field '" + key + "' has the wrong type");
            out_[key] = fallback;
            return fallback;
        }
    }

    json object(const std::string& key, json fallback)
    {
        json v = in_.contains(key) ? in_.at(key) : fallback;
        if (!v.is_object()) {
            problems.push_back("field '" + key + "' must be an object");
            v = fallback;
        }
        out_[key] = v;
        return v;
    }

    void require(bool ok, const std::string& why)
    {
        if (!ok) problems.push_back(why);
    }

    std::vector<std::string> problems;

private:
    const json& in_;
    json& out_;
};

SecondMoment resolve_m2(const json& cfg)
{
    const json& m = cfg.at("m2");
    if (m.is_object()) return SecondMoment(m.at("num").get<std::int64_t>(), m.at("den").get<std::int64_t>());
    return SecondMoment(m.get<double>());
}

void write_text(const fs::path& p, const std::string& text)
{
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + p.string());
    os << text;
}

void write_json(const fs::path& p, const json& j)
{
    write_text(p, j.dump(2) + "\n");
}

std::string fmt17(double x)
{
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

std::vector<MultiIndex> resolve_indices(const json& cfg, int k, int radius)
{
    if (cfg.contains("indices") && !cfg.at("indices").is_null()) return cfg.at("indices").get<std::vector<MultiIndex>>();
    return cube(k, radius);
}

ScalingSchedule schedule_for(const json& scaling, int N, std::vector<std::string>* warnings)
{
    const std::string regime = scaling.at("regime").get<std::string>();
    const double lambda = scaling.at("lambda").get<double>();
    const double alpha = scaling.value("alpha", 0.0);
    if (regime == "critical") return ScalingSchedule::critical(N, lambda, alpha);
    const Regime r = regime == "order" ? Regime::Order : Regime::Chaos;
    std::string warn;
    auto s = ScalingSchedule::with_epsilon(N, scaling.at("epsilon").get<double>(), r, lambda, alpha, &warn);
    if (!warn.empty() && warnings) warnings->push_back(warn);
    return s;
}

json tensors_over_time(const std::function<SpectralCoefficients(int, int, double)>& eval, int k, int radius,
                       const std::vector<double>& times)
{
    json arr = json::array();
    for (double t : times) {
        SpectralCoefficients c = eval(k, radius, t);
        arr.push_back(c);
    }
    return arr;
}

std::vector<double> uniform_grid(int points)
{
    std::vector<double> g(points);
    for (int i = 0; i < points; ++i) g[i] = -std::numbers::pi + 2.0 * std::numbers::pi * i / points;
    return g;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error("invalid config: " + join(problems)), problems_(std::move(problems))
{
}

std::uint64_t fnv1a64(const std::string& text)
{
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

const std::vector<std::string>& pipeline_names()
{
    static const std::vector<std::string> names = {"stationary",  "evolve", "evolve-finite", "simulate", "compare",
                                                   "check-order", "verify-bounds", "density", "constants"};
    return names;
}

json resolve_config(const std::string& command, const json& config, const RunOptions& opts)
{
    if (!config.is_object()) throw ConfigError({"config must be a JSON object"});
    const auto& names = pipeline_names();
    if (std::find(names.begin(), names.end(), command) == names.end())
        throw ConfigError({"unknown subcommand '" + command + "'"});

    json out = json::object();
    Resolver r(config, out);
    out["command"] = command;

    if (opts.seed) {
        out["seed"] = *opts.seed;
    } else if (!config.contains("seed")) {
        r.problems.push_back("field 'seed' is mandatory");
    } else if (!config.at("seed").is_number_unsigned()) {
        r.problems.push_back("field 'seed' must be a nonnegative integer");
    } else {
        out["seed"] = config.at("seed").get<std::uint64_t>();
    }

    const json gen_spec = r.object("generator", {{"family", "uniform"}, {"p", 2.0}, {"params", {{"width", 1.0}}}});
    double gen_m2 = 1.0;
    try {
        const auto gen = InteractionGenerator::from_json(gen_spec);
        out["generator"] = gen.to_json();
        gen_m2 = gen.m2();
    } catch (const std::exception& e) {
        r.problems.push_back(std::string("generator: ") + e.what());
    }

    json scaling = r.object("scaling", json::object());
    json sres = json::object();
    {
        Resolver sr(scaling, sres);
        const auto Ns = sr.take<std::vector<int>>("N", {64});
        const auto regime = sr.take<std::string>("regime", "critical");
        const auto lambda = sr.take<double>("lambda", 1.0);
        if (scaling.contains("alpha")) sr.take<double>("alpha", 0.0);
        if (scaling.contains("epsilon")) sr.take<double>("epsilon", 0.0);
        sr.require(!Ns.empty(), "scaling.N must list at least one particle count");
        for (int N : Ns) sr.require(N >= 2, "scaling.N entries must be at least 2");
        sr.require(regime == "critical" || regime == "order" || regime == "chaos",
                   "scaling.regime must be critical, order or chaos");
        sr.require(regime == "critical" || scaling.contains("epsilon"),
                   "scaling.epsilon is required outside the critical regime");
        sr.require(lambda > 0.0, "scaling.lambda must be positive");
        for (auto& p : sr.problems) r.problems.push_back(p);
    }
    out["scaling"] = sres;

    const json init_spec = r.object("initial", {{"kind", "chaotic"}, {"profile", {{"name", "uniform"}}}});
    try {
        out["initial"] = InitialData::from_json(init_spec).to_json();
    } catch (const std::exception& e) {
        r.problems.push_back(std::string("initial: ") + e.what());
    }

    const int k = r.take<int>("k", 2);
    r.require(k >= 1 && k <= 6, "k must lie in [1, 6]");
    r.take<int>("radius", default_radius(std::max(k, 1)));
    r.take<std::vector<double>>("times", {0.0, 0.5, 1.0, 2.0, 5.0});
    if (config.contains("m2")) {
        out["m2"] = config.at("m2");
        try {
            resolve_m2(out);
        } catch (const std::exception&) {
            r.problems.push_back("m2 must be a positive number or {num, den}");
        }
    } else {
        out["m2"] = gen_m2;
    }
    if (config.contains("indices")) {
        try {
            out["indices"] = config.at("indices").get<std::vector<MultiIndex>>();
        } catch (const std::exception&) {
            r.problems.push_back("indices must be a list of integer lists");
        }
    }
    const int K = r.take<int>("K", 4);
    r.require(K >= 1 && K <= 6, "K must lie in [1, 6]");
    r.take<int>("l", 4);
    r.take<int>("grid", 512);
    r.take<std::vector<int>>("density_orders", {1});
    r.take<double>("tol", 1e-8);

    json mc = r.object("mc", json::object());
    json mres = json::object();
    {
        Resolver mr(mc, mres);
        const int runs = mr.take<int>("runs", 200);
        mr.take<int>("tuples", k == 1 ? 0 : 1000);
        mr.take<double>("z", 4.0);
        int threads = mr.take<int>("threads", 1);
        if (const char* env = std::getenv("CLMF_THREADS")) threads = std::atoi(env);
        if (opts.threads) threads = *opts.threads;
        mres["threads"] = std::max(1, threads);
        mr.require(runs >= 1, "mc.runs must be positive");
        for (auto& p : mr.problems) r.problems.push_back(p);
    }
    out["mc"] = mres;

    if (command == "check-order") {
        if (!config.contains("family")) r.problems.push_back("check-order needs 'family'");
        else out["family"] = config.at("family");
        out["profile"] = r.object("profile", {{"type", "uniform"}});
    }

    std::string dir = opts.out_dir;
    if (dir.empty() && config.contains("output")) dir = config.at("output").get<std::string>();
    if (dir.empty()) {
        if (const char* env = std::getenv("CLMF_OUT_DIR")) dir = env;
    }
    if (dir.empty()) dir = "clmf_out";
    out["output"] = dir;

    if (!r.problems.empty()) throw ConfigError(r.problems);
    return out;
}

int run_pipeline(const std::string& command, const json& config, const RunOptions& opts, std::ostream& log)
{
    const json cfg = resolve_config(command, config, opts);
    const fs::path dir = cfg.at("output").get<std::string>();
    fs::create_directories(dir);

    const auto gen = InteractionGenerator::from_json(cfg.at("generator"));
    const auto init = InitialData::from_json(cfg.at("initial"));
    const SecondMoment m2 = resolve_m2(cfg);
    const int k = cfg.at("k").get<int>();
    const int radius = cfg.at("radius").get<int>();
    const auto times = cfg.at("times").get<std::vector<double>>();
    const double lambda = cfg.at("scaling").at("lambda").get<double>();
    const auto Ns = cfg.at("scaling").at("N").get<std::vector<int>>();
    const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
    const double tol = cfg.at("tol").get<double>();
    std::vector<std::string> warnings;
    std::vector<std::string> artifacts;
    bool ok = true;

    auto emit_json = [&](const std::string& name, const json& j) {
        write_json(dir / name, j);
        artifacts.push_back(name);
    };
    auto emit_text = [&](const std::string& name, const std::string& text) {
        write_text(dir / name, text);
        artifacts.push_back(name);
    };

    if (command == "stationary") {
        const int K = cfg.at("K").get<int>();
        StationaryHierarchy hier(K, m2);
        json orders = json::array();
        for (int j = 1; j <= K; ++j) {
            const int R = default_radius(j);
            orders.push_back({{"k", j}, {"nu", hier.nu_tensor(j, R)}, {"f_infty", hier.f_infty_tensor(j, R)}});
        }
        const double cv = hier.cross_validate(std::min(8, default_radius(K)));
        ok = cv <= 1e-10;
        emit_json("stationary.json", {{"m2", m2.value()}, {"K", K}, {"cross_validation", cv}, {"orders", orders}});
        log << "stationary: K=" << K << " cross-validation residual " << cv << "\n";
    } else if (command == "evolve") {
        const std::string regime = cfg.at("scaling").at("regime").get<std::string>();
        auto lim = regime == "order" ? evolve_order_regime(init, lambda, k) : evolve_limit_marginal(init, m2, lambda, k);
        json per_order = json::array();
        for (int j = 1; j <= k; ++j)
            per_order.push_back(tensors_over_time(
                [&](int kk, int R, double t) { return lim.evaluate(kk, R, t); }, j, radius, times));
        emit_json("limit_evolution.json", {{"regime", regime}, {"m2", m2.value()}, {"lambda", lambda}, {"orders", per_order}});
    } else if (command == "evolve-finite") {
        json runs = json::array();
        for (int N : Ns) {
            const auto sched = schedule_for(cfg.at("scaling"), N, &warnings);
            FiniteMarginalSolution fin(init, sched, gen, k);
            json per_order = json::array();
            std::size_t missing_total = 0;
            for (int j = 1; j <= k; ++j)
                per_order.push_back(tensors_over_time(
                    [&](int kk, int R, double t) {
                        std::size_t miss = 0;
                        auto c = fin.evaluate(kk, R, t, &miss);
                        missing_total += miss;
                        return c;
                    },
                    j, radius, times));
            runs.push_back({{"N", N}, {"epsilon", sched.epsilon}, {"missing", missing_total}, {"orders", per_order}});
        }
        emit_json("finite_evolution.json", {{"lambda", lambda}, {"runs", runs}});
    } else if (command == "simulate" || command == "compare") {
        const json& mc = cfg.at("mc");
        const int tuples = mc.at("tuples").get<int>();
        const auto indices = resolve_indices(cfg, k, std::min(radius, 3));
        std::ostringstream csv;
        csv << "N,index,t,mean_re,mean_im,stderr,n_samples";
        if (command == "compare") csv << ",exact_re,exact_im,within";
        csv << "\n";
        double worst_rate = 1.0;
        json summary = json::array();
        for (int N : Ns) {
            const auto sched = schedule_for(cfg.at("scaling"), N, &warnings);
            SimulationConfig sc;
            sc.times = times;
            sc.horizon = std::max(1e-12, *std::max_element(times.begin(), times.end()));
            sc.runs = mc.at("runs").get<int>();
            sc.seed = seed;
            sc.threads = mc.at("threads").get<int>();
            const auto sim = simulate(sched, gen, init, sc);
            const auto est = empirical_coefficients(sim, indices, tuples, seed ^ 0x9e3779b97f4a7c15ULL);
            std::optional<ComparisonReport> cmp;
            if (command == "compare") {
                FiniteMarginalSolution fin(init, sched, gen, k);
                cmp = compare_to_exact(est, fin, mc.at("z").get<double>());
                worst_rate = std::min(worst_rate, cmp->pass_rate);
                summary.push_back({{"N", N}, {"pass_rate", cmp->pass_rate}});
            }
            for (std::size_t i = 0; i < est.size(); ++i) {
                const auto& e = est[i];
                std::string idx;
                for (std::size_t r = 0; r < e.index.size(); ++r) idx += (r ? " " : "") + std::to_string(e.index[r]);
                csv << N << ',' << idx << ',' << fmt17(e.t) << ',' << fmt17(e.mean.real()) << ','
                    << fmt17(e.mean.imag()) << ',' << fmt17(e.std_error) << ',' << e.samples;
                if (cmp) {
                    const auto& c = cmp->entries[i];
                    csv << ',' << fmt17(c.exact.real()) << ',' << fmt17(c.exact.imag()) << ',' << (c.within ? 1 : 0);
                }
                csv << "\n";
            }
        }
        emit_text(command == "compare" ? "compare.csv" : "estimates.csv", csv.str());
        if (command == "compare") {
            ok = worst_rate >= 0.95;
            emit_json("compare.json", {{"z", mc.at("z")}, {"summary", summary}, {"pass", ok}});
        }
    } else if (command == "check-order") {
        std::vector<SpectralCoefficients> family;
        for (const auto& item : cfg.at("family")) {
            if (item.is_object() && item.contains("file")) {
                std::ifstream is(item.at("file").get<std::string>());
                if (!is) throw std::runtime_error("cannot read " + item.at("file").get<std::string>());
                family.push_back(json::parse(is).get<SpectralCoefficients>());
            } else {
                family.push_back(item.get<SpectralCoefficients>());
            }
        }
        const json& ps = cfg.at("profile");
        const std::string type = ps.value("type", "uniform");
        PartialOrderProfile profile;
        std::optional<StationaryHierarchy> hier;
        if (type == "uniform") {
            profile = PartialOrderProfile::uniform();
        } else if (type == "ordered") {
            profile = PartialOrderProfile::ordered(Profile1D::from_json(ps.at("mu0")).coef);
        } else if (type == "stationary") {
            hier.emplace(int(family.size()), m2);
            const StationaryHierarchy* h = &*hier;
            profile = PartialOrderProfile::from_nu(
                [](long n) { return cplx(delta0(n), 0.0); },
                [h](const MultiIndex& n) { return cplx(h->nu(n), 0.0); }, "stationary");
        } else {
            throw ConfigError({"profile.type must be uniform, ordered or stationary"});
        }
        const auto v = check_partial_order_factorization(family, profile, tol);
        ok = v.pass;
        emit_json("check_order.json", {{"profile", type}, {"pass", v.pass}, {"residual", v.residual}, {"failures", v.failures}});
    } else if (command == "verify-bounds") {
        const int l = cfg.at("l").get<int>();
        const int kk = std::min(k, 3);
        StationaryHierarchy hier(std::max(kk, 2), m2);
        auto lim = evolve_limit_marginal(init, m2, lambda, kk);
        const auto indices = resolve_indices(cfg, kk, std::min(radius, 3));
        std::vector<double> positive;
        for (double t : times)
            if (t > 0.0) positive.push_back(t);
        auto limit_rep = limit_distance_check(lim, hier, indices, positive);
        json finite = json::array();
        std::string csv = limit_rep.to_csv();
        for (int N : Ns) {
            const auto sched = schedule_for(cfg.at("scaling"), N, &warnings);
            FiniteMarginalSolution fin(init, sched, gen, kk);
            const auto ledger = constants_ledger(gen, N, kk, l, lambda, sched.alpha);
            auto rep = finite_distance_check(fin, lim, hier, ledger, indices, times);
            if (!rep.informational && !rep.pass()) ok = false;
            finite.push_back({{"N", N}, {"report", rep.to_json()}});
            const std::string body = rep.to_csv();
            csv += body.substr(body.find('\n') + 1);
        }
        if (!limit_rep.pass()) ok = false;
        emit_json("bounds.json", {{"limit", limit_rep.to_json()}, {"finite", finite}});
        emit_text("bounds.csv", csv);
    } else if (command == "density") {
        const int points = cfg.at("grid").get<int>();
        const auto grid = uniform_grid(points);
        const auto H = h_density(m2.value(), grid);
        std::ostringstream os;
        os << "theta_1,value\n";
        for (int i = 0; i < points; ++i) os << fmt17(grid[i]) << ',' << fmt17(H[i]) << "\n";
        emit_text("h_density.csv", os.str());
        const auto orders = cfg.at("density_orders").get<std::vector<int>>();
        int kmax = 1;
        for (int j : orders) kmax = std::max(kmax, j);
        StationaryHierarchy hier(kmax, m2);
        for (int j : orders) {
            if (j < 1) throw ConfigError({"density_orders entries must be positive"});
            const int side = std::max(2, int(std::lround(std::pow(double(points), 1.0 / j))));
            const auto g1 = uniform_grid(side);
            std::vector<std::vector<double>> pts;
            for (const auto& n : cube(j, (side - 1) / 2)) {
                std::vector<double> p;
                for (int x : n) p.push_back(g1[x + (side - 1) / 2]);
                pts.push_back(p);
            }
            const auto d = nu_density(hier, j, default_radius(j) / (j == 1 ? 1 : 2), pts);
            std::ostringstream ns;
            for (int r = 1; r <= j; ++r) ns << "theta_" << r << ',';
            ns << "value\n";
            for (std::size_t i = 0; i < pts.size(); ++i) {
                for (double x : pts[i]) ns << fmt17(x) << ',';
                ns << fmt17(d.values[i]) << "\n";
            }
            emit_text("nu_density_" + std::to_string(j) + ".csv", ns.str());
            if (d.min_value < -1e-8 || !d.max_at_origin) ok = false;
        }
    } else if (command == "constants") {
        const int l = cfg.at("l").get<int>();
        json arr = json::array();
        for (int N : Ns) arr.push_back(constants_ledger(gen, N, k, l, lambda).to_json());
        emit_json("constants.json", {{"ledgers", arr}});
    }

    const std::string canonical = cfg.dump();
    std::ostringstream hash;
    hash << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(canonical);
    write_json(dir / "manifest.json", {{"command", command},
                                       {"version", kVersion},
                                       {"config_hash", hash.str()},
                                       {"resolved_config", cfg},
                                       {"artifacts", artifacts},
                                       {"warnings", warnings},
                                       {"pass", ok}});
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::ostringstream ts;
    ts << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ") << "\n";
    write_text(dir / "timestamp.txt", ts.str());
    for (const auto& w : warnings) log << "warning: " << w << "\n";
    log << command << ": wrote " << artifacts.size() << " artifact(s) to " << dir.string() << (ok ? "" : " (checks failed)")
        << "\n";
    return ok ? 0 : 1;
}

int run(const std::string& command, const std::string& config_path, const RunOptions& opts, std::ostream& log)
{
    try {
        json config = json::object();
        if (!config_path.empty()) {
            std::ifstream is(config_path);
            if (!is) throw ConfigError({"cannot read config '" + config_path + "'"});
            try {
                config = json::parse(is);
            } catch (const json::parse_error& e) {
                throw ConfigError({std::string("malformed JSON: ") + e.what()});
            }
        }
        return run_pipeline(command, config, opts, log);
    } catch (const ConfigError& e) {
        log << "config error:\n";
        for (const auto& p : e.problems()) log << "  - " << p << "\n";
        return 2;
    } catch (const std::exception& e) {
        log << "runtime failure: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace clmf
