#include "cren/report.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace cren {

ReportFormat parse_format(std::string_view name) {
    if (name == "table") return ReportFormat::table;
    if (name == "csv") return ReportFormat::csv;
    if (name == "json") return ReportFormat::json;
    throw std::invalid_argument("unknown format '" + std::string(name) + "' (table, csv, json)");
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) v = 0.0;  // drop the sign of -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

Cell num(double v) { return {format_number(v), true}; }
Cell num(std::size_t v) { return {std::to_string(v), true}; }
Cell str(std::string s) { return {std::move(s), false}; }

void Table::add(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::logic_error("Table::add: row width does not match the header");
    rows.push_back(std::move(row));
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

bool finite_text(const std::string& s) { return s != "nan" && s != "inf" && s != "-inf"; }

}  // namespace

void Table::write(std::ostream& os, ReportFormat format) const {
    switch (format) {
        case ReportFormat::csv: {
            for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << csv_field(columns[c]);
            os << '\n';
            for (const auto& row : rows) {
                for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << csv_field(row[c].text);
                os << '\n';
            }
            break;
        }
        case ReportFormat::json: {
            os << "[";
            for (std::size_t r = 0; r < rows.size(); ++r) {
                os << (r ? ",\n  {" : "\n  {");
                for (std::size_t c = 0; c < columns.size(); ++c) {
                    os << (c ? ", " : "") << nlohmann::json(columns[c]).dump() << ": ";
                    const Cell& cell = rows[r][c];
                    if (!cell.numeric) {
                        os << nlohmann::json(cell.text).dump();
                    } else if (finite_text(cell.text)) {
                        os << cell.text;
                    } else {
                        os << "null";
                    }
                }
                os << "}";
            }
            os << (rows.empty() ? "]\n" : "\n]\n");
            break;
        }
        case ReportFormat::table: {
            std::vector<std::size_t> width(columns.size());
            for (std::size_t c = 0; c < columns.size(); ++c) width[c] = columns[c].size();
            for (const auto& row : rows)
                for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].text.size());
            auto line = [&](auto text_of, auto numeric_of) {
                for (std::size_t c = 0; c < columns.size(); ++c) {
                    const std::string& t = text_of(c);
                    const std::string pad(width[c] - t.size(), ' ');
                    if (c) os << "  ";
                    if (numeric_of(c)) {
                        os << pad << t;
                    } else {
                        os << t;
                        if (c + 1 < columns.size()) os << pad;
                    }
                }
                os << '\n';
            };
            line([&](std::size_t c) -> const std::string& { return columns[c]; }, [](std::size_t) { return false; });
            for (const auto& row : rows)
                line([&](std::size_t c) -> const std::string& { return row[c].text; }, [&](std::size_t c) { return row[c].numeric; });
            break;
        }
    }
}

Table audit_table(const std::vector<AuditReport>& reports) {
    Table t;
    t.columns = {"state_id", "measure", "focus", "lhs_sq", "rhs_sq_sum", "residual", "verdict", "rhs_terms_sq", "term_bounds"};
    for (const auto& r : reports) {
        std::string terms, bounds;
        for (std::size_t i = 0; i < r.terms.size(); ++i) {
            if (i) {
                terms += ';';
                bounds += ';';
            }
            terms += format_number(r.terms[i].value_sq);
            bounds += to_string(r.terms[i].bound);
        }
        t.add({str(r.state_id), str(std::string(to_string(r.inequality))), num(r.focus + 1), num(r.lhs_sq), num(r.rhs_sq_sum()),
               num(r.residual), str(std::string(to_string(r.verdict))), str(terms), str(bounds)});
    }
    return t;
}

}  // namespace cren
