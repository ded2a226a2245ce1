// sauvctl: tables, expression evaluation, verification scenarios and the discontinuity demo.
// Exit codes: 0 pass, 1 check failure, 2 usage or parse error.

#include "sauv/errors.hpp"
#include "sauv/golden.hpp"
#include "sauv/interpret.hpp"
#include "sauv/liberation.hpp"
#include "sauv/model_io.hpp"
#include "sauv/momentpoly.hpp"
#include "sauv/symexpr.hpp"
#include "sauv/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace sauv;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Format parse_format(const std::string& f)
{
    if (f == "text") return Format::Text;
    if (f == "latex") return Format::Latex;
    if (f == "json") return Format::Json;
    throw UsageError("format must be text, latex or json here");
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<Rational> parse_rationals(const std::string& list)
{
    std::vector<Rational> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        TimeExpr e = TimeExpr::parse(item);
        if (!e.is_constant()) throw UsageError("expected rational numbers, got '" + item + "'");
        out.push_back(e.constant());
    }
    return out;
}

// "t1=1/2,t2=1"
std::map<int, Rational> parse_assignment(const std::string& s)
{
    std::map<int, Rational> out;
    if (s.empty()) return out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw UsageError("time assignment must look like t1=1/2");
        TimeExpr var = TimeExpr::parse(item.substr(0, eq));
        if (var.coefficients().size() != 1 || var.constant() != 0 || var.coefficients()[0].second != 1)
            throw UsageError("left side of a time assignment must be a variable");
        TimeExpr val = TimeExpr::parse(item.substr(eq + 1));
        if (!val.is_constant()) throw UsageError("time values must be rational");
        out[var.coefficients()[0].first] = val.constant();
    }
    return out;
}

void print_matrix(std::ostream& os, const Mat& m)
{
    os.precision(12);
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            cd z = m(i, j);
            os << (j ? "  " : "") << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
        }
        os << "\n";
    }
}

int cmd_tables(const std::string& which, int max_len, const std::string& format, bool check,
               const std::string& golden)
{
    std::vector<Table> tables;
    if (which == "all")
        tables = all_tables();
    else
        tables.push_back(table_from_name(which));
    if (!golden.empty() && tables.size() != 1) throw UsageError("--golden needs a single table");
    bool ok = true;
    for (Table t : tables) {
        std::string path = golden.empty() ? default_golden_path(t) : golden;
        if (check) {
            TableCheck c = check_table(t, path, max_len);
            for (const auto& r : c.rows) {
                std::cout << (r.match ? "match    " : "MISMATCH ") << r.id << " (" << r.generated_terms << " terms"
                          << (r.status == "corrected" ? ", corrected row" : "") << ")";
                if (!r.match) std::cout << ": " << r.difference;
                std::cout << "\n";
            }
            std::cout << table_name(t) << ": " << (c.ok() ? "all rows match" : "mismatch") << "\n";
            ok = ok && c.ok();
            continue;
        }
        Format f = parse_format(format);
        for (const auto& row : load_golden(path)) {
            if (row.length() > max_len) continue;
            Expr e = generate_expression(row);
            std::string label = row.times.empty() ? "l=" + std::to_string(row.ell) : "S(" + row.times + ")";
            if (f == Format::Json)
                std::cout << nlohmann::json({{"id", row.id}, {"label", label}}).dump() << "\n" << emit_json(e) << "\n";
            else
                std::cout << row.id << "  " << label << "\n  " << emit(e, f) << "\n";
        }
    }
    return ok ? kPass : kFail;
}

int cmd_eval(const std::string& expr, const std::string& file, int moment, int scalar_moment, int left_moment,
             const std::string& smoment_times, const std::string& format, const std::string& model_path,
             const std::string& at, const std::string& hint)
{
    ParseOptions po;
    po.allow_macros = true;
    if (hint == "A") po.hint = Alg::A;
    else if (hint == "B") po.hint = Alg::B;
    else if (hint != "scalar") throw UsageError("--hint must be A, B or scalar");

    int sources = !expr.empty() + !file.empty() + (moment > 0) + (scalar_moment > 0) + (left_moment > 0) +
                  !smoment_times.empty();
    if (sources != 1) throw UsageError("give exactly one of --expr, FILE, --moment, --scalar-moment, --left-moment, --smoment");

    std::optional<TimedPair> pair;
    Expr e;
    if (!expr.empty()) {
        e = parse(expr, po);
    } else if (!file.empty()) {
        std::string text = read_file(file);
        auto first = text.find_first_not_of(" \t\r\n");
        if (first != std::string::npos && text[first] == '{') {
            nlohmann::json j = nlohmann::json::parse(text);
            if (j.contains("times")) {
                std::vector<std::string> ts, es;
                for (const auto& t : j.at("times")) ts.push_back(t.get<std::string>());
                for (const auto& x : j.value("elems", nlohmann::json::array())) es.push_back(x.get<std::string>());
                std::string joined;
                for (std::size_t i = 0; i < ts.size(); ++i) joined += (i ? "," : "") + ts[i];
                pair = TimedPair::parse(joined, es);
                e = smoment(*pair);
            } else {
                e = parse_json(text, po.rewrite);
            }
        } else {
            e = parse(text, po);
        }
    } else if (moment > 0) {
        e = reduced_moment_right(moment);
    } else if (scalar_moment > 0) {
        e = reduced_moment_scalar(scalar_moment);
    } else if (left_moment > 0) {
        e = moment_left(LeftWord::generic(left_moment));
    } else {
        pair = TimedPair::parse(smoment_times);
        e = smoment(*pair);
    }

    if (model_path.empty()) {
        std::cout << emit(e, parse_format(format)) << "\n";
        return kPass;
    }
    // Numeric evaluation in a model: symbols from the model bindings, times from --at.
    MatModel m = load_model(model_path);
    auto values = parse_assignment(at);
    std::map<int, double> tv;
    for (const auto& [k, v] : values) tv[k] = to_double(v);
    Mat x = interpret(e, model_interpretation(m, tv));
    print_matrix(std::cout, x);
    if (pair) {
        Mat y = smoment_numeric(*pair, m, values);
        std::cout << "recursion difference " << (x - y).norm() << "\n";
    }
    return kPass;
}

int cmd_verify(const std::string& path, const std::string& format, long seed, double tol, int depth,
               int max_word_len, int trials, const std::string& output)
{
    Scenario s = load_scenario(path);
    if (seed >= 0) s.seed = static_cast<std::uint64_t>(seed);
    if (depth > 0) s.depth = depth;
    if (max_word_len > 0) s.max_word_len = max_word_len;
    if (trials > 0) s.trials = trials;
    if (tol > 0) {
        s.tol.model = s.tol.representation = s.tol.retraction = s.tol.liberation = tol;
        s.tol.oracle = s.tol.consistency = s.tol.shift = s.tol.discontinuity = tol;
    } else if (tol == 0 || tol < -1.5) {
        throw UsageError("--tol must be positive");
    }
    if (s.max_word_len > 4) throw UsageError("--max-word-len must be at most 4");
    Report r = run_scenario(s);
    std::string body = format == "json" ? r.json() : format == "text" ? r.text() : "";
    if (body.empty()) throw UsageError("verify supports --format text or json");
    if (output.empty()) {
        std::cout << body;
    } else {
        std::ofstream(output) << body;
        std::cout << (r.ok() ? "pass" : "FAIL") << "\n";
    }
    return r.ok() ? kPass : kFail;
}

int cmd_discontinuity(const std::string& model_path, const std::string& times, int levels, const std::string& taus,
                      double tol, bool general, const std::string& format)
{
    MatModel m = model_path.empty() ? default_model() : load_model(model_path);
    std::vector<Rational> t = parse_rationals(times);
    if (t.size() != 3) throw UsageError("--times needs t1,t2,t3");
    if (!(0 < t[0] && t[0] < t[1] && t[1] < t[2])) throw UsageError("times must satisfy 0 < t1 < t2 < t3");
    std::vector<Rational> tau = taus.empty() ? std::vector<Rational>{} : parse_rationals(taus);
    if (tau.empty())
        for (int k = 1; k <= levels; ++k) tau.push_back(make_rational(1, std::int64_t{1} << k));
    for (const auto& x : tau)
        if (!(0 < x && x < t[0])) throw UsageError("tau values must satisfy 0 < tau < t1");
    std::vector<Mat> as;
    for (int i = 1; i <= 5; ++i) as.push_back(m.binding("a" + std::to_string(i)));
    DiscontinuityReport r = discontinuity(as, t[0], t[1], t[2], tau, m, general);
    bool ok = r.mismatch <= tol;
    if (format == "csv") {
        std::cout << r.csv();
    } else {
        std::cout << r.csv() << "limit gap norm " << r.limit_gap.norm() << "\nclosed form norm " << r.closed_form.norm()
                  << "\nmismatch " << r.mismatch << " (tolerance " << tol << ")\n";
    }
    std::cerr << (ok ? "gap matches the closed form" : "gap does NOT match the closed form") << "\n";
    return ok ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Symbolic moments, moment polynomials and numerical dilation checks"};
    app.require_subcommand(1);
    std::string format = "text";

    auto* tables = app.add_subcommand("tables", "Generate the reference tables, or check them against golden files");
    std::string which = "all", golden;
    int max_len = 4;
    bool check = false;
    tables->add_option("which", which, "momentsGeneral, momentsScalar, momentPolys, discontinuity or all");
    tables->add_option("--max-len", max_len, "Skip rows longer than this")->check(CLI::PositiveNumber);
    tables->add_option("--format", format, "text, latex or json");
    tables->add_flag("--check", check, "Compare with the golden files; exit 1 on mismatch");
    tables->add_option("--golden", golden, "Golden file to use instead of the bundled one");

    auto* eval = app.add_subcommand("eval", "Normalize an expression or compute a moment / moment polynomial");
    std::string expr, file, smoment_times, model_path, at, hint = "scalar";
    int moment = 0, scalar_moment = 0, left_moment = 0;
    eval->add_option("file", file, "Expression file (text, expression JSON, or {\"times\": [...], \"elems\": [...]})");
    eval->add_option("--expr", expr, "Expression text");
    eval->add_option("--moment", moment, "Reduced general moment of length l");
    eval->add_option("--scalar-moment", scalar_moment, "Reduced moment with scalar psi of length l");
    eval->add_option("--left-moment", left_moment, "Left moment of the generic word of length l");
    eval->add_option("--smoment", smoment_times, "Moment polynomial for a time pattern, e.g. t2,0,t1,t2");
    eval->add_option("--hint", hint, "Algebra for scalar-valued input: A, B or scalar");
    eval->add_option("--model", model_path, "Evaluate numerically in this model");
    eval->add_option("--at", at, "Time values for numeric evaluation, e.g. t1=1/2,t2=1");
    eval->add_option("--format", format, "text, latex or json");

    auto* verify = app.add_subcommand("verify", "Run a verification scenario");
    std::string scenario, output;
    long seed = -1;
    double tol = -1;
    int depth = 0, max_word_len = 0, trials = 0;
    verify->add_option("scenario", scenario, "Scenario JSON file")->required();
    verify->add_option("--format", format, "text or json");
    verify->add_option("--seed", seed, "Override the scenario seed");
    verify->add_option("--tol", tol, "Override every tolerance");
    verify->add_option("--depth", depth, "Truncation depth of product spaces");
    verify->add_option("--max-word-len", max_word_len, "Maximal word length in towers");
    verify->add_option("--trials", trials, "Random cases per check");
    verify->add_option("--output", output, "Write the report here");

    auto* disc = app.add_subcommand("discontinuity", "Tabulate the tau -> 0+ family and compare the jump");
    std::string disc_model, disc_times = "1,2,3", taus;
    int levels = 8;
    double disc_tol = 1e-9;
    bool general = false;
    disc->add_option("--model", disc_model, "Model JSON (default: built-in default model)");
    disc->add_option("--times", disc_times, "t1,t2,t3 with 0 < t1 < t2 < t3");
    disc->add_option("--levels", levels, "Use tau = 2^-1 .. 2^-levels")->check(CLI::Range(1, 40));
    disc->add_option("--taus", taus, "Explicit comma-separated tau values");
    disc->add_option("--tol", disc_tol, "Tolerance for the closed-form comparison");
    disc->add_flag("--general", general, "Use omega(phi_t3(a3)) in the closed form (non-invariant states)");
    disc->add_option("--format", format, "text or csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kPass : kUsage;
    }

    try {
        if (*tables) return cmd_tables(which, max_len, format, check, golden);
        if (*eval)
            return cmd_eval(expr, file, moment, scalar_moment, left_moment, smoment_times, format, model_path, at,
                            hint);
        if (*verify) return cmd_verify(scenario, format, seed, tol, depth, max_word_len, trials, output);
        if (*disc) return cmd_discontinuity(disc_model, disc_times, levels, taus, disc_tol, general, format);
    } catch (const ParseError& e) {
        std::cerr << e.what() << "\n";
        return kUsage;
    } catch (const TypeError& e) {
        std::cerr << "type error: " << e.what() << "\n";
        return kUsage;
    } catch (const UsageError& e) {
        std::cerr << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFail;
    }
    return kUsage;
}
