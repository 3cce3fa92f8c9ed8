#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace nosas {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

// Unit square cut into S x S subdomains of m x m grid squares each. Every
// square is split along its lower-left to upper-right diagonal.
//
// Node (i, j) has index j * (n + 1) + i. Square (i, j) owns elements
// 2 * (j * n + i) (lower-right triangle) and 2 * (j * n + i) + 1 (upper-left).
class StructuredMesh {
public:
    StructuredMesh(int subdomains_per_side, int cells_per_subdomain_side);

    int subdomains_per_side() const { return S_; }
    int cells_per_subdomain_side() const { return m_; }
    int cells_per_side() const { return n_; }
    double h() const { return 1.0 / n_; }
    double H() const { return 1.0 / S_; }

    int num_nodes() const { return (n_ + 1) * (n_ + 1); }
    int num_elements() const { return 2 * n_ * n_; }
    int num_subdomains() const { return S_ * S_; }

    int node(int i, int j) const { return j * (n_ + 1) + i; }
    int node_i(int v) const { return v % (n_ + 1); }
    int node_j(int v) const { return v / (n_ + 1); }
    Point coord(int v) const { return {node_i(v) * h(), node_j(v) * h()}; }

    bool is_dirichlet(int v) const { return dirichlet_[v] != 0; }
    const std::vector<std::uint8_t>& dirichlet() const { return dirichlet_; }

    const std::array<int, 3>& element(int e) const { return elements_[e]; }
    const std::vector<std::array<int, 3>>& elements() const { return elements_; }
    // Grid square (i, j) of element e.
    int element_cell_i(int e) const { return (e / 2) % n_; }
    int element_cell_j(int e) const { return (e / 2) / n_; }
    // Subdomain index sy * S + sx containing element e.
    int element_subdomain(int e) const;

    double signed_area(int e) const;

private:
    int S_;
    int m_;
    int n_;
    std::vector<std::array<int, 3>> elements_;
    std::vector<std::uint8_t> dirichlet_;
};

struct CoefficientField {
    std::vector<double> rho;  // one value per element
    std::string pattern_tag;

    double min() const;
    double max() const;
};

enum class Pattern {
    constant,
    channel,
    comb,
    string,
    inclusion_grid,
    dual_stripe,
    added_channels,
    raster_file,
};

std::string to_string(Pattern p);
Pattern pattern_from_string(const std::string& s);

struct PatternSpec {
    Pattern variant = Pattern::constant;
    double high_value = 1e6;
    double low_value = 1.0;
    double extra_value = 1e12;
    int channels = 0;          // added_channels: number of extra-value channels, 0..4
    std::string raster_path;   // raster_file
};

// Values used in the experiments for each variant (string uses 1e12 contrast).
PatternSpec default_pattern(Pattern p);

CoefficientField generate_coefficients(const StructuredMesh& mesh, const PatternSpec& spec);

// Comma-separated raster, one row per grid-square row, first row at the top.
CoefficientField load_coefficient_grid(std::istream& in, const StructuredMesh& mesh);
CoefficientField load_coefficient_grid(const std::string& path, const StructuredMesh& mesh);

// Per-square values (n x n, index j * n + i) expanded to both triangles.
CoefficientField field_from_cells(const StructuredMesh& mesh, const std::vector<double>& cells,
                                  std::string tag);

} // namespace nosas
