#pragma once

// Bundled reference tables: loading, regeneration and exact comparison.

#include "sauv/symexpr.hpp"

#include <string>
#include <vector>

namespace sauv {

enum class Table { MomentsGeneral, MomentsScalar, MomentPolys, Discontinuity };

const std::vector<Table>& all_tables();
std::string table_name(Table t);  // momentsGeneral, momentsScalar, momentPolys, discontinuity
Table table_from_name(const std::string& s);
std::string default_golden_path(Table t);

struct GoldenRow {
    std::string id;
    std::string kind;  // moment_general, moment_scalar, moment_poly, gap
    int ell = 0;
    std::string times;
    bool invariant_omega = false;
    std::string source;
    std::string expression;
    std::string status;  // exact or corrected
    std::string note;

    int length() const;  // ell, or the number of times
};

std::vector<GoldenRow> load_golden(const std::string& path);

RewriteOptions row_rewrite(const GoldenRow& row);
Expr expected_expression(const GoldenRow& row);
Expr generate_expression(const GoldenRow& row);

// Empty when equal; otherwise the first differing term of the canonical orders.
std::string first_difference(const Expr& generated, const Expr& expected);

struct RowCheck {
    std::string id;
    std::string status;
    bool match = false;
    std::size_t generated_terms = 0;
    std::size_t expected_terms = 0;
    std::string difference;
    double seconds = 0;
};

struct TableCheck {
    Table table = Table::MomentsGeneral;
    std::vector<RowCheck> rows;
    double seconds = 0;
    bool ok() const;
};

// Rows longer than max_len are skipped.
TableCheck check_table(Table t, const std::string& path, int max_len = 1 << 20);
TableCheck check_table(Table t, int max_len = 1 << 20);

}  // namespace sauv
