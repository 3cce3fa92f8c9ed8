#pragma once

#include <string>
#include <vector>

namespace nosas {

// How a measured cell is compared with its stored reference.
//   exact   integer equality
//   rel     |measured - reference| <= tolerance * |reference|
//   abs     |measured - reference| <= tolerance
//   factor  max(measured / reference, reference / measured) <= tolerance
//   stretch as rel, reported but not counted towards the table verdict
//   info    no reference check
struct TableRow {
    std::string label;
    double measured = 0.0;
    double reference = 0.0;
    bool has_reference = false;
    double tolerance = 0.0;
    std::string mode = "info";
    bool pass = true;
    bool counted() const { return has_reference && mode != "info" && mode != "stretch"; }
};

struct TableResult {
    std::string id;
    std::vector<TableRow> rows;

    bool pass() const;
    const TableRow* find(const std::string& label) const;
    std::string format() const;
    std::string to_csv() const;
};

struct TableOptions {
    std::string reference_dir;
    int threads = 0;
    // Largest subdomains-per-side value run for the grid tables (T3, T4).
    int max_subdomains = 16;
    // T7 input: raster path, mesh shape and an optional dataset name used to
    // look up reference rows (e.g. Kxx_06).
    std::string raster;
    int subdomains = 0;
    int cells = 0;
    std::string dataset;
};

std::vector<std::string> table_ids();

// Reference rows: label,reference,tolerance,mode.
std::vector<TableRow> load_reference(const std::string& path);

// Compares measured label/value pairs with the reference file for `id`.
TableResult compare_with_reference(const std::string& id, const std::vector<std::pair<std::string, double>>& measured,
                                   const std::string& reference_dir);

TableResult reproduce_table(const std::string& id, const TableOptions& options);

} // namespace nosas
