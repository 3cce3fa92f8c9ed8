#include "nosas/mesh.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "nosas/errors.hpp"

namespace nosas {

StructuredMesh::StructuredMesh(int subdomains_per_side, int cells_per_subdomain_side)
    : S_(subdomains_per_side), m_(cells_per_subdomain_side), n_(0)
{
    if (S_ < 1 || m_ < 1)
        throw InvalidParameter("mesh sizes must be >= 1 (got subdomains=" + std::to_string(S_) +
                               ", cells=" + std::to_string(m_) + ")");
    n_ = S_ * m_;
    elements_.reserve(static_cast<std::size_t>(2) * n_ * n_);
    for (int j = 0; j < n_; ++j) {
        for (int i = 0; i < n_; ++i) {
            elements_.push_back({node(i, j), node(i + 1, j), node(i + 1, j + 1)});
            elements_.push_back({node(i, j), node(i + 1, j + 1), node(i, j + 1)});
        }
    }
    dirichlet_.assign(num_nodes(), 0);
    for (int v = 0; v < num_nodes(); ++v) {
        const int i = node_i(v), j = node_j(v);
        if (i == 0 || j == 0 || i == n_ || j == n_) dirichlet_[v] = 1;
    }
}

int StructuredMesh::element_subdomain(int e) const
{
    return (element_cell_j(e) / m_) * S_ + element_cell_i(e) / m_;
}

double StructuredMesh::signed_area(int e) const
{
    const auto& t = elements_[e];
    const Point a = coord(t[0]), b = coord(t[1]), c = coord(t[2]);
    return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

double CoefficientField::min() const { return *std::min_element(rho.begin(), rho.end()); }
double CoefficientField::max() const { return *std::max_element(rho.begin(), rho.end()); }

CoefficientField field_from_cells(const StructuredMesh& mesh, const std::vector<double>& cells,
                                  std::string tag)
{
    const int n = mesh.cells_per_side();
    if (static_cast<int>(cells.size()) != n * n) throw ShapeError("cell field size mismatch");
    CoefficientField f;
    f.pattern_tag = std::move(tag);
    f.rho.resize(mesh.num_elements());
    for (int c = 0; c < n * n; ++c) {
        f.rho[2 * c] = cells[c];
        f.rho[2 * c + 1] = cells[c];
    }
    return f;
}

CoefficientField load_coefficient_grid(std::istream& in, const StructuredMesh& mesh)
{
    const int n = mesh.cells_per_side();
    std::vector<std::vector<double>> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                const double v = std::stod(cell, &used);
                if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
                row.push_back(v);
            } catch (const std::logic_error&) {
                throw FormatError("raster row " + std::to_string(rows.size() + 1) + " (line " +
                                  std::to_string(lineno) + "): bad number '" + cell + "'");
            }
        }
        if (static_cast<int>(row.size()) != n)
            throw FormatError("raster row " + std::to_string(rows.size() + 1) + " has " +
                              std::to_string(row.size()) + " values, expected " + std::to_string(n));
        rows.push_back(std::move(row));
    }
    if (static_cast<int>(rows.size()) != n)
        throw FormatError("raster has " + std::to_string(rows.size()) + " rows, expected " +
                          std::to_string(n));

    std::vector<double> cells(static_cast<std::size_t>(n) * n);
    for (int r = 0; r < n; ++r) {
        const int j = n - 1 - r;  // first row is the top of the domain
        for (int i = 0; i < n; ++i) {
            const double v = rows[r][i];
            if (!(v > 0.0))
                throw DomainError("raster value at row " + std::to_string(r) + ", column " +
                                  std::to_string(i) + " is not positive");
            cells[static_cast<std::size_t>(j) * n + i] = v;
        }
    }
    return field_from_cells(mesh, cells, "raster");
}

CoefficientField load_coefficient_grid(const std::string& path, const StructuredMesh& mesh)
{
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open raster file '" + path + "'");
    auto f = load_coefficient_grid(in, mesh);
    f.pattern_tag = "raster:" + path;
    return f;
}

} // namespace nosas
