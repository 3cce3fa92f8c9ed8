#include <array>
#include <utility>
#include <vector>

#include "nosas/errors.hpp"
#include "nosas/mesh.hpp"

namespace nosas {

namespace {

struct Cells {
    int n;
    std::vector<double> v;
    Cells(int n_, double fill) : n(n_), v(static_cast<std::size_t>(n_) * n_, fill) {}
    double& at(int i, int j) { return v[static_cast<std::size_t>(j) * n + i]; }
};

void require(bool ok, const std::string& pattern, const std::string& what)
{
    if (!ok) throw InvalidParameter(pattern + " pattern: " + what);
}

bool in_low_channel(int l, int m)
{
    const int w = m / 4, c = m / 8;
    return (l >= w && l < w + c) || (l >= 2 * w + c && l < 2 * w + 2 * c);
}

// Paint a design raster given in units of u x u cells, offset by (x0, y0) cells.
void paint(Cells& cells, const std::vector<std::pair<int, int>>& design, int u, int x0, int y0,
           double value)
{
    for (auto [dx, dy] : design)
        for (int b = 0; b < u; ++b)
            for (int a = 0; a < u; ++a) cells.at(x0 + dx * u + a, y0 + dy * u + b) = value;
}

Cells inclusion_cells(int n, int m, double high, double low)
{
    Cells cells(n, high);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            if (in_low_channel(i % m, m) || in_low_channel(j % m, m)) cells.at(i, j) = low;
    return cells;
}

// Comb drawn on a 32 x 32 design grid covering the lower-left 2 x 2 subdomains.
std::vector<std::pair<int, int>> comb_design()
{
    std::vector<std::pair<int, int>> d;
    for (int x = 0; x < 24; ++x) d.emplace_back(x, 24);
    for (int x : {4, 10, 20})
        for (int y = 12; y < 24; ++y) d.emplace_back(x, y);
    for (int y = 16; y < 22; ++y) d.emplace_back(13, y);
    return d;
}

// Strings drawn on an 8 x 8 design grid of one subdomain.
std::vector<std::pair<int, int>> string_design(int which)
{
    std::vector<std::pair<int, int>> d;
    if (which == 1) {
        for (int x = 0; x < 8; ++x) d.emplace_back(x, 4);
        for (int y = 5; y < 8; ++y) d.emplace_back(3, y);
    } else {
        d = {{0, 2}, {1, 2}, {2, 2}, {3, 2}, {3, 1},
             {7, 2}, {6, 2}, {5, 2}, {5, 1},
             {3, 7}, {3, 6}, {3, 5}, {3, 4}};
    }
    return d;
}

} // namespace

std::string to_string(Pattern p)
{
    switch (p) {
    case Pattern::constant: return "constant";
    case Pattern::channel: return "channel";
    case Pattern::comb: return "comb";
    case Pattern::string: return "string";
    case Pattern::inclusion_grid: return "inclusion_grid";
    case Pattern::dual_stripe: return "dual_stripe";
    case Pattern::added_channels: return "added_channels";
    case Pattern::raster_file: return "raster_file";
    }
    return "?";
}

Pattern pattern_from_string(const std::string& s)
{
    for (Pattern p : {Pattern::constant, Pattern::channel, Pattern::comb, Pattern::string,
                      Pattern::inclusion_grid, Pattern::dual_stripe, Pattern::added_channels,
                      Pattern::raster_file})
        if (to_string(p) == s) return p;
    if (s == "raster") return Pattern::raster_file;
    throw InvalidParameter("unknown pattern '" + s + "'");
}

PatternSpec default_pattern(Pattern p)
{
    PatternSpec spec;
    spec.variant = p;
    if (p == Pattern::string) spec.high_value = 1e12;
    return spec;
}

CoefficientField generate_coefficients(const StructuredMesh& mesh, const PatternSpec& spec)
{
    const int S = mesh.subdomains_per_side();
    const int m = mesh.cells_per_subdomain_side();
    const int n = mesh.cells_per_side();
    const double hi = spec.high_value, lo = spec.low_value;
    const std::string name = to_string(spec.variant);
    require(hi > 0.0 && lo > 0.0 && spec.extra_value > 0.0, name, "coefficient values must be positive");

    std::string tag = name;
    Cells cells(n, lo);
    switch (spec.variant) {
    case Pattern::constant:
        break;
    case Pattern::channel: {
        require(m % 4 == 0, name, "cells per subdomain side must be divisible by 4");
        const int row = (S / 2) * m + m / 4;
        for (int i = 0; i < n; ++i) cells.at(i, row) = hi;
        break;
    }
    case Pattern::comb: {
        require(S >= 2, name, "needs at least 2 subdomains per side");
        require(m % 16 == 0, name, "cells per subdomain side must be divisible by 16");
        paint(cells, comb_design(), m / 16, 0, 0, hi);
        break;
    }
    case Pattern::string: {
        require(S >= 4, name, "needs at least 4 subdomains per side (two floating subdomains)");
        require(m % 8 == 0, name, "cells per subdomain side must be divisible by 8");
        paint(cells, string_design(1), m / 8, m, m, hi);
        paint(cells, string_design(2), m / 8, 2 * m, m, hi);
        break;
    }
    case Pattern::inclusion_grid:
        require(m % 8 == 0, name, "cells per subdomain side must be divisible by 8");
        cells = inclusion_cells(n, m, hi, lo);
        break;
    case Pattern::dual_stripe: {
        require(S >= 4, name, "needs at least 4 subdomains per side");
        require(m % 8 == 0, name, "cells per subdomain side must be divisible by 8");
        const int inset = m / 8;
        const std::array<std::pair<int, bool>, 2> subs{{{S / 2, true}, {S / 2 - 1, false}}};
        for (auto [s, touching] : subs) {
            const int x0 = s * m, y0 = s * m;
            for (int b = 0; b < m; ++b) {
                for (int a = 0; a < m; ++a) {
                    const bool inside_a = touching || (a >= inset && a < m - inset);
                    const bool inside_b = touching || (b >= inset && b < m - inset);
                    const bool low = (in_low_channel(b, m) && inside_a) || (in_low_channel(a, m) && inside_b);
                    cells.at(x0 + a, y0 + b) = low ? lo : hi;
                }
            }
        }
        break;
    }
    case Pattern::added_channels: {
        require(S >= 4, name, "needs at least 4 subdomains per side");
        require(m % 8 == 0, name, "cells per subdomain side must be divisible by 8");
        require(spec.channels >= 0 && spec.channels <= 4, name, "channels must be in 0..4");
        cells = inclusion_cells(n, m, hi, lo);
        const int off = m / 2 - 1;
        const std::array<std::pair<bool, int>, 4> order{{{true, 1}, {false, 1}, {true, S - 2}, {false, S - 2}}};
        for (int k = 0; k < spec.channels; ++k) {
            const auto [horizontal, s] = order[k];
            const int pos = s * m + off;
            for (int t = 0; t < n; ++t) {
                if (horizontal)
                    cells.at(t, pos) = spec.extra_value;
                else
                    cells.at(pos, t) = spec.extra_value;
            }
        }
        tag += "(" + std::to_string(spec.channels) + ")";
        break;
    }
    case Pattern::raster_file:
        require(!spec.raster_path.empty(), name, "raster path is empty");
        return load_coefficient_grid(spec.raster_path, mesh);
    }
    return field_from_cells(mesh, cells.v, tag);
}

} // namespace nosas
