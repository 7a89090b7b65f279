#include "pbqct/report.hpp"

#include <charconv>
#include <cmath>
#include <limits>

namespace pbqct {

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

double inv_gap(double F) {
    if (F >= 1.0) return std::numeric_limits<double>::infinity();
    return 1.0 / (1.0 - F);
}

void write_csv(std::ostream& out, const std::vector<FidelityRecord>& records, bool with_inv_gap) {
    out << "d,n,set,method,F,f";
    if (with_inv_gap) out << ",inv_gap";
    out << '\n';
    for (const auto& r : records) {
        // Labels contain commas, so the set column is always quoted.
        out << r.d << ',' << r.n_ports << ",\"" << r.set << "\"," << to_string(r.method) << ','
            << format_number(r.F) << ',' << format_number(r.f);
        if (with_inv_gap) out << ',' << format_number(inv_gap(r.F));
        out << '\n';
    }
}

Json record_json(const FidelityRecord& record) {
    Json j;
    j["d"] = record.d;
    j["n"] = record.n_ports;
    j["set"] = record.set;
    j["method"] = to_string(record.method);
    j["F"] = record.F;
    j["f"] = record.f;
    return j;
}

Json class_report_json(const ClassReport& report) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["d"] = report.d;
    j["n"] = report.n_ports;
    j["k"] = report.k;
    j["tolerance"] = report.tolerance;
    j["subset_count"] = report.subset_count;
    Json classes = Json::array();
    for (const auto& c : report.classes) {
        Json cj;
        cj["fidelity"] = c.fidelity;
        cj["spread"] = c.spread;
        cj["size"] = c.members.size();
        cj["members"] = c.members;
        classes.push_back(std::move(cj));
    }
    j["classes"] = std::move(classes);
    return j;
}

Json matrix_json(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace pbqct
