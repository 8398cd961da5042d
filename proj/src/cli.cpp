#include "biharm/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <variant>

#include "biharm/bessel.hpp"
#include "biharm/kernel.hpp"
#include "biharm/linear.hpp"
#include "biharm/semilinear.hpp"

namespace biharm::cli {
namespace {

using Cell = std::variant<double, long long, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::pair<std::string, Cell>> meta;

    void add_meta(const std::string& k, Cell v) { meta.emplace_back(k, std::move(v)); }
};

std::string fmt_double(double v) {
    char buf[64];
    snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += "\"\"";
        else q += c;
    }
    q += "\"";
    return q;
}

std::string cell_text(const Cell& c) {
    if (std::holds_alternative<double>(c)) return fmt_double(std::get<double>(c));
    if (std::holds_alternative<long long>(c))
        return std::to_string(std::get<long long>(c));
    return std::get<std::string>(c);
}

void write_csv(const Table& t, std::ostream& out) {
    for (const auto& [k, v] : t.meta)
        out << "# " << csv_quote(k) << "," << csv_quote(cell_text(v)) << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        out << (i ? "," : "") << csv_quote(t.columns[i]);
    out << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << csv_quote(cell_text(row[i]));
        out << "\n";
    }
}

void write_json(const Table& t, std::ostream& out) {
    nlohmann::json j;
    j["meta"] = nlohmann::json::object();
    for (const auto& [k, v] : t.meta) {
        if (std::holds_alternative<double>(v)) j["meta"][k] = std::get<double>(v);
        else if (std::holds_alternative<long long>(v)) j["meta"][k] = std::get<long long>(v);
        else j["meta"][k] = std::get<std::string>(v);
    }
    j["rows"] = nlohmann::json::array();
    for (const auto& row : t.rows) {
        nlohmann::json r = nlohmann::json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            const Cell& c = row[i];
            if (std::holds_alternative<double>(c)) r[t.columns[i]] = std::get<double>(c);
            else if (std::holds_alternative<long long>(c))
                r[t.columns[i]] = std::get<long long>(c);
            else r[t.columns[i]] = std::get<std::string>(c);
        }
        j["rows"].push_back(std::move(r));
    }
    out << j.dump(2) << "\n";
}

struct Range {
    double min = 0.0, max = 0.0;
    int count = 0;
    bool log = false;

    std::vector<double> values() const {
        return log ? logspace(min, max, count) : linspace(min, max, count);
    }
};

Range parse_range(const std::string& text) {
    Range r;
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    if (parts.size() < 3 || parts.size() > 4)
        throw CLI::ValidationError("range", "expected MIN:MAX:COUNT[:linear|log]");
    try {
        r.min = std::stod(parts[0]);
        r.max = std::stod(parts[1]);
        r.count = std::stoi(parts[2]);
    } catch (const std::exception&) {
        throw CLI::ValidationError("range", "non-numeric field in " + text);
    }
    if (parts.size() == 4) {
        if (parts[3] == "log") r.log = true;
        else if (parts[3] == "linear") r.log = false;
        else throw CLI::ValidationError("range", "spacing must be linear or log");
    }
    if (r.count < 1 || !(r.min <= r.max))
        throw CLI::ValidationError("range", "empty or unordered range " + text);
    if (r.log && !(r.min > 0.0))
        throw CLI::ValidationError("range", "log range requires positive endpoints");
    return r;
}

RadialDensity load_density(const std::string& path, double q) {
    std::ifstream in(path);
    if (!in) throw DomainError("riesz: cannot open density file " + path);
    RadialDensity d;
    d.q = q;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double r, v;
        if (ss >> r >> v) {
            d.r.push_back(r);
            d.f.push_back(v);
        }
    }
    if (d.r.size() < 2) throw DomainError("riesz: density file needs >= 2 samples");
    return d;
}

struct Options {
    std::string format = "csv";
    std::string out_path;
    double tol = 1e-9;
    unsigned threads = 0;
};

void emit(const Table& t, const Options& opt, std::ostream& out, std::ostream& err) {
    if (!opt.out_path.empty()) {
        std::ofstream f(opt.out_path, std::ios::binary);
        if (!f) {
            err << "error: cannot open output path " << opt.out_path << "\n";
            throw DomainError("output path");
        }
        if (opt.format == "json") write_json(t, f);
        else write_csv(t, f);
    } else {
        if (opt.format == "json") write_json(t, out);
        else write_csv(t, out);
    }
}

void add_verdict_meta(Table& t, const PositivityReport& rep) {
    const char* verdict =
        rep.verdict == Verdict::CertifiedPositive   ? "certified-positive"
        : rep.verdict == Verdict::WitnessNegative ? "witness-negative"
                                                    : "inconclusive";
    const char* method = rep.method == Method::LobeMonotonicity   ? "lobe-monotonicity"
                         : rep.method == Method::N2DerivativeTrick ? "N2-derivative-trick"
                         : rep.method == Method::N1MonotoneMap     ? "N1-monotone-map"
                                                                   : "grid-scan";
    t.add_meta("verdict", std::string(verdict));
    t.add_meta("method", std::string(method));
    t.add_meta("beta0", rep.beta0);
    if (rep.witness) {
        t.add_meta("witness_eta", rep.witness->first);
        t.add_meta("witness_value", rep.witness->second);
    }
    t.add_meta("details", rep.details);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"biharmonic heat kernel and positivity toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    Options opt;
    app.add_option("--format", opt.format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", opt.out_path, "output path (default: stdout)");
    app.add_option("--tol", opt.tol, "quadrature tolerance, in (0, 1e-2]");
    app.add_option("--threads", opt.threads, "inner parallelism override");

    // bessel
    auto* sc_bessel = app.add_subcommand("bessel", "Bessel J evaluation and zeros");
    double mu = 0.0;
    int zeros = 0;
    std::string eval_range;
    sc_bessel->add_option("--mu", mu, "order, >= -1/2")->required();
    auto* opt_zeros = sc_bessel->add_option("--zeros", zeros, "number of zeros");
    auto* opt_eval = sc_bessel->add_option("--eval", eval_range, "eta range");
    opt_zeros->excludes(opt_eval);

    // kernel
    auto* sc_kernel = app.add_subcommand("kernel", "kernel profile f_N");
    int kdim = 0;
    std::string keval;
    double ksign_max = 0.0;
    bool kident = false;
    sc_kernel->add_option("--dim", kdim, "dimension N")->required();
    auto* opt_keval = sc_kernel->add_option("--eval", keval, "eta range");
    auto* opt_ksign = sc_kernel->add_option("--sign-changes", ksign_max, "eta max");
    auto* opt_kident = sc_kernel->add_flag("--identity-check", kident,
                                           "derivative identity residual table");
    opt_keval->excludes(opt_ksign);
    opt_keval->excludes(opt_kident);
    opt_ksign->excludes(opt_kident);

    // profile
    auto* sc_profile = app.add_subcommand("profile", "self-similar profile F");
    int pdim = 0;
    double pbeta = 0.0;
    std::string peta;
    bool pcertify = false;
    sc_profile->add_option("--dim", pdim, "dimension N")->required();
    sc_profile->add_option("--beta", pbeta, "datum exponent")->required();
    sc_profile->add_option("--eta", peta, "eta range")->required();
    sc_profile->add_flag("--certify", pcertify, "attach positivity certificate");

    // solution
    auto* sc_solution = app.add_subcommand("solution", "linear solution values");
    int sdim = 0;
    double sbeta = 0.0;
    std::string sx, st;
    sc_solution->add_option("--dim", sdim, "dimension N")->required();
    sc_solution->add_option("--beta", sbeta, "datum exponent")->required();
    sc_solution->add_option("--x", sx, "x range")->required();
    sc_solution->add_option("--t", st, "t range")->required();

    // scan
    auto* sc_scan = app.add_subcommand("scan", "beta positivity scan");
    int cdim = 0;
    double blo = 0.0, bhi = 0.0, bres = 0.0;
    sc_scan->add_option("--dim", cdim, "dimension N")->required();
    sc_scan->add_option("--beta-lo", blo, "scan start")->required();
    sc_scan->add_option("--beta-hi", bhi, "scan end")->required();
    sc_scan->add_option("--resolution", bres, "beta step")->required();

    // riesz
    auto* sc_riesz = app.add_subcommand("riesz", "Riesz-potential superposition");
    int rdim = 0;
    double rbeta = 0.0, rq = 0.0;
    std::string rdensity, rx, rt;
    sc_riesz->add_option("--dim", rdim, "dimension N")->required();
    sc_riesz->add_option("--beta", rbeta, "datum exponent")->required();
    sc_riesz->add_option("--q", rq, "Lebesgue exponent of the density")->required();
    sc_riesz->add_option("--density", rdensity, "two-column CSV (radius,value)")
        ->required();
    sc_riesz->add_option("--x", rx, "x range")->required();
    sc_riesz->add_option("--t", rt, "t range")->required();

    // semilinear
    auto* sc_semi = app.add_subcommand("semilinear", "Picard solution profile");
    int mdim = 0;
    double mp = 0.0, meps = 0.0, mtol = 1e-8;
    int miters = 15;
    bool menv = false;
    sc_semi->add_option("--dim", mdim, "dimension N")->required();
    sc_semi->add_option("--p", mp, "nonlinearity exponent")->required();
    sc_semi->add_option("--epsilon", meps, "datum size")->required();
    sc_semi->add_option("--max-iters", miters, "iteration budget");
    sc_semi->add_option("--tol", mtol, "fixed-point tolerance");
    sc_semi->add_flag("--envelopes", menv, "report envelope constants");

    // hbound
    auto* sc_hbound = app.add_subcommand("hbound", "weighted H integral");
    int hdim = 0;
    double hp = 0.0;
    std::string hx, ht;
    sc_hbound->add_option("--dim", hdim, "dimension N")->required();
    sc_hbound->add_option("--p", hp, "nonlinearity exponent")->required();
    sc_hbound->add_option("--x", hx, "x range")->required();
    sc_hbound->add_option("--t", ht, "t range")->required();

    std::vector<const char*> argv;
    argv.push_back("biharm");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }

    try {
        if (!(opt.tol > 0.0 && opt.tol <= 1e-2))
            throw DomainError("usage: --tol must lie in (0, 1e-2]");
        if (opt.threads > 0) set_thread_count(opt.threads);

        Table t;
        if (sc_bessel->parsed()) {
            if (opt_zeros->count() == 0 && opt_eval->count() == 0)
                throw DomainError("usage: bessel requires --zeros or --eval");
            const Order order(mu);
            t.add_meta("subcommand", std::string("bessel"));
            t.add_meta("mu", mu);
            if (opt_zeros->count()) {
                if (zeros < 1) throw DomainError("usage: --zeros must be positive");
                t.columns = {"k", "zero"};
                for (int k = 1; k <= zeros; ++k)
                    t.rows.push_back({static_cast<long long>(k), bessel_zero(order, k)});
            } else {
                t.columns = {"eta", "J", "J_prime"};
                for (double e : parse_range(eval_range).values())
                    t.rows.push_back({e, bessel_j(order, e), bessel_j_prime(order, e)});
            }
        } else if (sc_kernel->parsed()) {
            t.add_meta("subcommand", std::string("kernel"));
            t.add_meta("dim", static_cast<long long>(kdim));
            if (opt_keval->count()) {
                t.columns = {"eta", "f", "abs_err"};
                for (double e : parse_range(keval).values())
                    t.rows.push_back({e, f_profile(kdim, e, opt.tol), opt.tol});
            } else if (opt_ksign->count()) {
                t.columns = {"index", "eta"};
                auto zs = sign_changes(kdim, ksign_max, opt.tol);
                for (std::size_t i = 0; i < zs.size(); ++i)
                    t.rows.push_back({static_cast<long long>(i + 1), zs[i]});
            } else if (kident) {
                t.columns = {"eta", "residual"};
                double worst = 0.0;
                for (double e : linspace(0.5, 5.0, 10)) {
                    const double r = derivative_identity_residual(kdim, {e});
                    worst = std::max(worst, r);
                    t.rows.push_back({e, r});
                }
                t.add_meta("max_residual", worst);
            } else {
                throw DomainError(
                    "usage: kernel requires --eval, --sign-changes or --identity-check");
            }
        } else if (sc_profile->parsed()) {
            t.add_meta("subcommand", std::string("profile"));
            t.add_meta("dim", static_cast<long long>(pdim));
            t.add_meta("beta", pbeta);
            t.columns = {"eta", "F_value", "abs_err"};
            for (double e : parse_range(peta).values()) {
                FResult r = F_detail(pdim, pbeta, e, opt.tol);
                t.rows.push_back({e, r.value, r.err});
            }
            if (pcertify) add_verdict_meta(t, certify_positivity(pdim, pbeta));
        } else if (sc_solution->parsed()) {
            t.add_meta("subcommand", std::string("solution"));
            t.add_meta("dim", static_cast<long long>(sdim));
            t.add_meta("beta", sbeta);
            SelfSimilarProfile prof = SelfSimilarProfile::build(sdim, sbeta);
            t.columns = {"x", "t", "u"};
            for (double x : parse_range(sx).values())
                for (double tt : parse_range(st).values())
                    t.rows.push_back({x, tt, prof.solution(x, tt)});
        } else if (sc_scan->parsed()) {
            t.add_meta("subcommand", std::string("scan"));
            t.add_meta("dim", static_cast<long long>(cdim));
            BetaScanResult scan = scan_beta_threshold(cdim, blo, bhi, bres);
            t.add_meta("largest_all_positive", scan.largest_all_positive);
            t.add_meta("smallest_negative", scan.smallest_negative);
            t.columns = {"beta", "all_positive", "min_value", "min_eta"};
            for (const auto& r : scan.rows)
                t.rows.push_back({r.beta, static_cast<long long>(r.all_positive ? 1 : 0),
                                  r.min_value, r.min_eta});
        } else if (sc_riesz->parsed()) {
            t.add_meta("subcommand", std::string("riesz"));
            t.add_meta("dim", static_cast<long long>(rdim));
            t.add_meta("beta", rbeta);
            t.add_meta("q", rq);
            RadialDensity density = load_density(rdensity, rq);
            SelfSimilarProfile prof = SelfSimilarProfile::build(rdim, rbeta);
            t.columns = {"x", "t", "value"};
            for (double x : parse_range(rx).values())
                for (double tt : parse_range(rt).values())
                    t.rows.push_back({x, tt, riesz_smoothing(prof, density, x, tt)});
        } else if (sc_semi->parsed()) {
            t.add_meta("subcommand", std::string("semilinear"));
            t.add_meta("dim", static_cast<long long>(mdim));
            t.add_meta("p", mp);
            t.add_meta("epsilon", meps);
            ProblemSpec spec;
            spec.dim = mdim;
            spec.p = mp;
            spec.epsilon = meps;
            spec.tol = mtol;
            spec.max_iters = miters;
            PicardResult r = picard_solve(spec);
            t.add_meta("beta", spec.beta());
            t.add_meta("iterations", static_cast<long long>(r.iterations));
            t.add_meta("correction_norm", r.correction_norm);
            std::string log;
            for (std::size_t i = 0; i < r.diffs.size(); ++i)
                log += (i ? ";" : "") + fmt_double(r.diffs[i]);
            t.add_meta("contraction_log", log);
            if (menv) {
                SemilinearEnvelopes env = verify_envelopes(spec, r.u);
                t.add_meta("M_star_upper", env.M_star_upper);
                if (env.M_star) t.add_meta("M_star", *env.M_star);
                else t.add_meta("M_star", std::string("absent"));
            }
            t.columns = {"eta", "W", "weighted"};
            for (std::size_t i = 0; i < r.u.w.size(); ++i) {
                const double eta = (*r.u.grid)[i];
                t.rows.push_back(
                    {eta, r.u.w[i], (std::pow(eta, spec.beta()) + 1.0) * r.u.w[i]});
            }
        } else if (sc_hbound->parsed()) {
            t.add_meta("subcommand", std::string("hbound"));
            t.add_meta("dim", static_cast<long long>(hdim));
            t.add_meta("p", hp);
            std::vector<std::pair<double, double>> xt;
            for (double x : parse_range(hx).values())
                for (double tt : parse_range(ht).values()) xt.push_back({x, tt});
            HReport rep = H_bound_report(hdim, hp, xt);
            t.add_meta("weighted_sup", rep.weighted_sup);
            t.add_meta("c2", rep.c2_used);
            t.columns = {"x", "t", "H", "weighted"};
            const double beta = 4.0 / (hp - 1.0);
            for (const auto& s : rep.samples)
                t.rows.push_back({s.x, s.t, s.H,
                                  (std::pow(s.x, beta) + std::pow(s.t, 0.25 * beta)) *
                                      s.H});
        }
        emit(t, opt, out, err);
        return 0;
    } catch (const CLI::ValidationError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        const std::string what = e.what();
        if (what.rfind("usage:", 0) == 0) {
            err << what << "\n";
            return 2;
        }
        err << "error: " << what << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace biharm::cli
