// report.hpp — tabular output in aligned-text, CSV and JSON form.

#pragma once

#include "cren/monogamy.hpp"

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace cren {

enum class ReportFormat { table, csv, json };

/// Throws std::invalid_argument for anything but table, csv or json.
ReportFormat parse_format(std::string_view name);

/// 12 significant digits; "nan"/"inf" for non-finite values.
std::string format_number(double v);

struct Cell {
    std::string text;
    bool numeric = false;
};

Cell num(double v);
Cell num(std::size_t v);
Cell str(std::string s);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row);
    /// JSON emits an array of objects; numeric cells are bare numbers (null if non-finite).
    void write(std::ostream& os, ReportFormat format) const;
};

/// Columns state_id, measure, focus, lhs_sq, rhs_sq_sum, residual, verdict,
/// rhs_terms_sq, term_bounds. Party numbers are printed 1-based; per-term
/// lists are ';'-separated in partner order.
Table audit_table(const std::vector<AuditReport>& reports);

}  // namespace cren
