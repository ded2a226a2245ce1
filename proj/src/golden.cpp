#include "sauv/golden.hpp"

#include "sauv/liberation.hpp"
#include "sauv/momentpoly.hpp"

#include <json.hpp>

#include <chrono>
#include <fstream>
#include <stdexcept>

namespace sauv {

const std::vector<Table>& all_tables()
{
    static const std::vector<Table> t = {Table::MomentsGeneral, Table::MomentsScalar, Table::MomentPolys,
                                         Table::Discontinuity};
    return t;
}

std::string table_name(Table t)
{
    switch (t) {
    case Table::MomentsGeneral: return "momentsGeneral";
    case Table::MomentsScalar: return "momentsScalar";
    case Table::MomentPolys: return "momentPolys";
    case Table::Discontinuity: return "discontinuity";
    }
    return "";
}

Table table_from_name(const std::string& s)
{
    for (Table t : all_tables())
        if (table_name(t) == s) return t;
    throw std::invalid_argument("unknown table '" + s + "'");
}

std::string default_golden_path(Table t)
{
    std::string dir = std::string(SAUV_DATA_DIR) + "/golden/";
    switch (t) {
    case Table::MomentsGeneral: return dir + "moments_general.json";
    case Table::MomentsScalar: return dir + "moments_scalar.json";
    case Table::MomentPolys: return dir + "moment_polynomials.json";
    case Table::Discontinuity: return dir + "discontinuity.json";
    }
    return dir;
}

int GoldenRow::length() const
{
    if (!times.empty()) return static_cast<int>(TimedPair::parse(times).size());
    return ell;
}

std::vector<GoldenRow> load_golden(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open golden file " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    std::vector<GoldenRow> rows;
    for (const auto& r : j.at("rows")) {
        GoldenRow g;
        g.id = r.at("id").get<std::string>();
        g.kind = r.at("kind").get<std::string>();
        const auto& input = r.at("input");
        g.ell = input.value("ell", 0);
        g.times = input.value("times", std::string());
        g.invariant_omega = input.value("invariant_omega", false);
        g.source = r.value("source", std::string());
        g.expression = r.at("expression").get<std::string>();
        g.status = r.value("status", std::string("exact"));
        g.note = r.value("note", std::string());
        rows.push_back(std::move(g));
    }
    return rows;
}

RewriteOptions row_rewrite(const GoldenRow& row)
{
    RewriteOptions o;
    o.invariant_omega = row.invariant_omega;
    return o;
}

Expr expected_expression(const GoldenRow& row)
{
    ParseOptions po;
    po.rewrite = row_rewrite(row);
    po.allow_macros = true;
    po.hint = (row.kind == "moment_general" || row.kind == "moment_scalar") ? Alg::B : Alg::A;
    return parse(row.expression, po);
}

Expr generate_expression(const GoldenRow& row)
{
    RewriteOptions ro = row_rewrite(row);
    LiberationOptions lo;
    lo.rewrite = ro;
    if (row.kind == "moment_general") return reduced_moment_right(row.ell, lo);
    if (row.kind == "moment_scalar") return reduced_moment_scalar(row.ell, lo);
    if (row.kind == "moment_poly") return smoment(TimedPair::parse(row.times), ro);
    if (row.kind == "gap") return discontinuity_gap_symbolic(ro);
    throw std::invalid_argument("unknown golden row kind '" + row.kind + "'");
}

std::string first_difference(const Expr& generated, const Expr& expected)
{
    auto single = [](const Expr& e, const Term& t) { return emit_text(Expr::from_terms(e.target(), {t})); };
    const auto& g = generated.terms();
    const auto& x = expected.terms();
    std::size_t i = 0, j = 0;
    while (i < g.size() || j < x.size()) {
        int c = i == g.size() ? 1 : j == x.size() ? -1 : compare_key(g[i], x[j]);
        if (c < 0) return "extra term " + single(generated, g[i]);
        if (c > 0) return "missing term " + single(expected, x[j]);
        if (g[i].coef != x[j].coef)
            return "coefficient differs: generated " + single(generated, g[i]) + ", expected " + single(expected, x[j]);
        ++i;
        ++j;
    }
    if (generated.target() != expected.target() && !generated.is_zero()) return "target algebras differ";
    return "";
}

bool TableCheck::ok() const
{
    for (const auto& r : rows)
        if (!r.match) return false;
    return true;
}

TableCheck check_table(Table t, const std::string& path, int max_len)
{
    using clock = std::chrono::steady_clock;
    auto start = clock::now();
    TableCheck out;
    out.table = t;
    for (const auto& row : load_golden(path)) {
        if (row.length() > max_len) continue;
        auto r0 = clock::now();
        RowCheck rc;
        rc.id = row.id;
        rc.status = row.status;
        Expr gen = generate_expression(row);
        Expr exp = expected_expression(row);
        rc.generated_terms = gen.size();
        rc.expected_terms = exp.size();
        rc.difference = first_difference(gen, exp);
        rc.match = rc.difference.empty();
        rc.seconds = std::chrono::duration<double>(clock::now() - r0).count();
        out.rows.push_back(std::move(rc));
    }
    out.seconds = std::chrono::duration<double>(clock::now() - start).count();
    return out;
}

TableCheck check_table(Table t, int max_len) { return check_table(t, default_golden_path(t), max_len); }

}  // namespace sauv
