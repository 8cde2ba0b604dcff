#include "iktsne/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "iktsne/errors.hpp"

namespace iktsne {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_cell(const std::string& token, std::size_t line, std::size_t column) {
    const std::string t = trim(token);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw parse_error("non-numeric cell '" + t + "' at line " + std::to_string(line) +
                          ", column " + std::to_string(column), line, column);
    }
    return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string token;
    std::stringstream ss(line);
    while (std::getline(ss, token, sep)) {
        out.push_back(token);
    }
    if (!line.empty() && line.back() == sep) {
        out.emplace_back();
    }
    return out;
}

class LabelMapper {
public:
    int id_for(const std::string& token) {
        const auto it = ids_.find(token);
        if (it != ids_.end()) {
            return it->second;
        }
        const int id = static_cast<int>(names_.size());
        ids_.emplace(token, id);
        names_.push_back(token);
        return id;
    }

    Labels labels(std::vector<int> values) const {
        return Labels{std::move(values), static_cast<int>(names_.size())};
    }

    const std::vector<std::string>& names() const { return names_; }

private:
    std::unordered_map<std::string, int> ids_;
    std::vector<std::string> names_;
};

constexpr const char* kPalette[10] = {
    "#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00",
    "#a65628", "#f781bf", "#17becf", "#999933", "#66c2a5",
};

std::string format_double(const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

}  // namespace

DatasetBundle load_dense_csv(const std::string& path, std::optional<std::size_t> label_column,
                             bool has_header) {
    std::ifstream in(path);
    if (!in) {
        throw io_error("load_dense_csv: cannot open " + path);
    }
    std::vector<double> values;
    std::vector<int> label_values;
    LabelMapper mapper;
    std::size_t width = 0;
    std::size_t line_no = 0;
    bool skipped_header = false;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        if (has_header && !skipped_header) {
            skipped_header = true;
            continue;
        }
        const auto cells = split(line, ',');
        if (width == 0) {
            width = cells.size();
            if (label_column && *label_column >= width) {
                throw argument_error("load_dense_csv: label column " + std::to_string(*label_column) +
                                     " out of range for " + std::to_string(width) + " columns");
            }
            if (width < (label_column ? 2u : 1u)) {
                throw parse_error("load_dense_csv: no feature columns", line_no);
            }
        } else if (cells.size() != width) {
            throw parse_error("ragged row at line " + std::to_string(line_no) + ": expected " +
                              std::to_string(width) + " cells, got " + std::to_string(cells.size()),
                              line_no);
        }
        for (std::size_t c = 0; c < width; ++c) {
            if (label_column && c == *label_column) {
                label_values.push_back(mapper.id_for(trim(cells[c])));
            } else {
                values.push_back(parse_cell(cells[c], line_no, c + 1));
            }
        }
    }
    const std::size_t d = label_column ? width - 1 : width;
    if (values.empty()) {
        throw parse_error("load_dense_csv: no data rows in " + path, line_no);
    }
    DatasetBundle bundle{DataMatrix::dense(d, std::move(values)), std::nullopt, path, false, {}};
    if (label_column) {
        bundle.labels = mapper.labels(std::move(label_values));
        bundle.label_names = mapper.names();
    }
    return bundle;
}

DatasetBundle load_sparse_svm(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw io_error("load_sparse_svm: cannot open " + path);
    }
    std::vector<std::vector<std::pair<std::uint32_t, double>>> rows;
    std::vector<int> label_values;
    LabelMapper mapper;
    std::uint32_t max_index = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string body = trim(line);
        if (body.empty()) {
            continue;
        }
        std::stringstream ss(body);
        std::string token;
        ss >> token;
        label_values.push_back(mapper.id_for(token));

        std::vector<std::pair<std::uint32_t, double>> row;
        long long prev = 0;
        while (ss >> token) {
            const auto colon = token.find(':');
            if (colon == std::string::npos || colon == 0 || colon + 1 >= token.size()) {
                throw parse_error("malformed index:value pair '" + token + "' at line " +
                                  std::to_string(line_no), line_no);
            }
            std::uint32_t idx = 0;
            auto [p1, e1] = std::from_chars(token.data(), token.data() + colon, idx);
            if (e1 != std::errc() || p1 != token.data() + colon || idx < 1) {
                throw parse_error("bad feature index in '" + token + "' at line " +
                                  std::to_string(line_no), line_no);
            }
            double val = 0.0;
            auto [p2, e2] = std::from_chars(token.data() + colon + 1, token.data() + token.size(), val);
            if (e2 != std::errc() || p2 != token.data() + token.size()) {
                throw parse_error("bad feature value in '" + token + "' at line " +
                                  std::to_string(line_no), line_no);
            }
            if (static_cast<long long>(idx) <= prev) {
                throw parse_error("non-ascending feature index " + std::to_string(idx) +
                                  " at line " + std::to_string(line_no), line_no);
            }
            prev = idx;
            max_index = std::max(max_index, idx);
            row.emplace_back(idx - 1, val);  // 1-based on disk, 0-based in memory
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw parse_error("load_sparse_svm: no data rows in " + path, line_no);
    }
    const std::size_t d = std::max<std::size_t>(max_index, 1);
    DatasetBundle bundle{DataMatrix::sparse(d, rows), std::nullopt, path, false, {}};
    bundle.labels = mapper.labels(std::move(label_values));
    bundle.label_names = mapper.names();
    return bundle;
}

Labels load_labels(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw io_error("load_labels: cannot open " + path);
    }
    LabelMapper mapper;
    std::vector<int> values;
    std::string line;
    while (std::getline(in, line)) {
        const std::string body = trim(line);
        if (!body.empty()) {
            values.push_back(mapper.id_for(body));
        }
    }
    return mapper.labels(std::move(values));
}

DatasetBundle minmax_normalize(const DatasetBundle& bundle) {
    const DataMatrix& m = bundle.data;
    const std::size_t n = m.n();
    const std::size_t d = m.d();
    DatasetBundle out = bundle;
    out.normalized = true;

    if (m.storage_kind() == StorageKind::dense) {
        std::vector<double> values(n * d, 0.0);
        for (std::size_t a = 0; a < d; ++a) {
            double lo = m.dense_row(0)[a];
            double hi = lo;
            for (std::size_t i = 1; i < n; ++i) {
                const double v = m.dense_row(i)[a];
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            const double range = hi - lo;
            for (std::size_t i = 0; i < n; ++i) {
                values[i * d + a] = range > 0.0 ? (m.dense_row(i)[a] - lo) / range : 0.0;
            }
        }
        out.data = DataMatrix::dense(d, std::move(values));
        return out;
    }

    // Sparse: implicit zeros take part in each attribute's range. Attributes
    // whose zero maps to a nonzero value are materialized in the rows that
    // lacked them.
    std::vector<double> lo(d, std::numeric_limits<double>::infinity());
    std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
    std::vector<std::size_t> stored(d, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto idx = m.sparse_indices(i);
        const auto val = m.sparse_values(i);
        for (std::size_t k = 0; k < idx.size(); ++k) {
            lo[idx[k]] = std::min(lo[idx[k]], val[k]);
            hi[idx[k]] = std::max(hi[idx[k]], val[k]);
            ++stored[idx[k]];
        }
    }
    std::vector<double> zero_image(d, 0.0);
    for (std::size_t a = 0; a < d; ++a) {
        if (stored[a] == 0) {
            lo[a] = 0.0;
            hi[a] = 0.0;
        } else if (stored[a] < n) {
            lo[a] = std::min(lo[a], 0.0);
            hi[a] = std::max(hi[a], 0.0);
        }
        const double range = hi[a] - lo[a];
        zero_image[a] = range > 0.0 ? (0.0 - lo[a]) / range : 0.0;
    }
    std::vector<std::uint32_t> filled_attrs;
    for (std::size_t a = 0; a < d; ++a) {
        if (zero_image[a] != 0.0 && stored[a] < n) {
            filled_attrs.push_back(static_cast<std::uint32_t>(a));
        }
    }

    std::vector<std::vector<std::pair<std::uint32_t, double>>> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto idx = m.sparse_indices(i);
        const auto val = m.sparse_values(i);
        auto& row = rows[i];
        std::size_t k = 0;
        std::size_t f = 0;
        const auto transformed = [&](std::size_t slot) {
            const std::uint32_t a = idx[slot];
            const double range = hi[a] - lo[a];
            return range > 0.0 ? (val[slot] - lo[a]) / range : 0.0;
        };
        // merge stored entries with materialized zero images
        while (k < idx.size() || f < filled_attrs.size()) {
            if (f == filled_attrs.size() || (k < idx.size() && idx[k] < filled_attrs[f])) {
                row.emplace_back(idx[k], transformed(k));
                ++k;
            } else if (k == idx.size() || filled_attrs[f] < idx[k]) {
                row.emplace_back(filled_attrs[f], zero_image[filled_attrs[f]]);
                ++f;
            } else {  // attribute both stored and in the fill list
                row.emplace_back(idx[k], transformed(k));
                ++k;
                ++f;
            }
        }
    }
    out.data = DataMatrix::sparse(d, rows);
    return out;
}

void save_embedding_csv(const Embedding& e, const std::optional<Labels>& labels,
                        const std::string& path) {
    if (labels) {
        validate_labels(*labels, e.n);
    }
    std::ofstream outf(path);
    if (!outf) {
        throw io_error("save_embedding_csv: cannot open " + path);
    }
    for (std::size_t i = 0; i < e.n; ++i) {
        outf << format_double("%.17g", e.x(i)) << ',' << format_double("%.17g", e.y(i));
        if (labels) {
            outf << ',' << labels->values[i];
        }
        outf << '\n';
    }
    if (!outf) {
        throw io_error("save_embedding_csv: write failed for " + path);
    }
}

Embedding load_embedding_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw io_error("load_embedding_csv: cannot open " + path);
    }
    Embedding e;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto cells = split(line, ',');
        if (cells.size() != 2 && cells.size() != 3) {
            throw parse_error("embedding row must have 2 or 3 columns at line " +
                              std::to_string(line_no), line_no);
        }
        e.coords.push_back(parse_cell(cells[0], line_no, 1));
        e.coords.push_back(parse_cell(cells[1], line_no, 2));
    }
    e.n = e.coords.size() / 2;
    if (e.n < 2) {
        throw parse_error("load_embedding_csv: need at least 2 rows in " + path, line_no);
    }
    return e;
}

void write_trace_csv(const OptimizerTrace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw io_error("write_trace_csv: cannot open " + path);
    }
    out << "iteration,kl,gradient_norm\n";
    for (std::size_t i = 0; i < trace.kl_per_iteration.size(); ++i) {
        out << i << ',' << format_double("%.17g", trace.kl_per_iteration[i]) << ','
            << format_double("%.17g", trace.gradient_norm_per_iteration[i]) << '\n';
    }
}

void render_scatter_svg(const Embedding& e, const std::optional<Labels>& labels,
                        const std::string& path) {
    if (labels) {
        validate_labels(*labels, e.n);
    }
    for (double c : e.coords) {
        if (!std::isfinite(c)) {
            throw argument_error("render_scatter_svg: non-finite coordinate");
        }
    }
    constexpr double kCanvas = 640.0;
    constexpr double kMarginFrac = 0.05;

    double lo[2];
    double hi[2];
    for (int axis = 0; axis < 2; ++axis) {
        lo[axis] = e.coords[axis];
        hi[axis] = e.coords[axis];
        for (std::size_t i = 1; i < e.n; ++i) {
            lo[axis] = std::min(lo[axis], e.coords[2 * i + axis]);
            hi[axis] = std::max(hi[axis], e.coords[2 * i + axis]);
        }
    }
    const auto project = [&](double v, int axis) {
        const double extent = hi[axis] - lo[axis];
        const double margin = kCanvas * kMarginFrac;
        if (extent <= 0.0) {
            return kCanvas / 2.0;
        }
        const double unit = (v - lo[axis]) / extent;
        const double span = kCanvas - 2.0 * margin;
        // SVG y grows downward
        return axis == 0 ? margin + unit * span : kCanvas - margin - unit * span;
    };

    std::ofstream out(path);
    if (!out) {
        throw io_error("render_scatter_svg: cannot open " + path);
    }
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" "
           "viewBox=\"0 0 640 640\">\n";
    out << "<rect width=\"640\" height=\"640\" fill=\"#ffffff\"/>\n";
    for (std::size_t i = 0; i < e.n; ++i) {
        const char* colour = labels ? kPalette[labels->values[i] % 10] : "#808080";
        out << "<circle cx=\"" << format_double("%.2f", project(e.x(i), 0)) << "\" cy=\""
            << format_double("%.2f", project(e.y(i), 1)) << "\" r=\"3\" fill=\"" << colour
            << "\"/>\n";
    }
    out << "</svg>\n";
    if (!out) {
        throw io_error("render_scatter_svg: write failed for " + path);
    }
}

}  // namespace iktsne
