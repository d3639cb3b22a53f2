#include "dedmon/io/csv.hpp"

#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "dedmon/core/error.hpp"
#include "dedmon/io/files.hpp"

namespace dedmon::io {

namespace {

std::vector<std::string_view> split_line(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

double parse_double(std::string_view cell, std::size_t line_no) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        raise(ErrorKind::Format, "line " + std::to_string(line_no) + ": cannot parse '" + std::string(cell) + "'");
    }
    if (!std::isfinite(v)) raise(ErrorKind::Format, "line " + std::to_string(line_no) + ": non-finite cell");
    return v;
}

void check_text_cell(const std::string& s) {
    if (s.find_first_of(",\"\r\n") != std::string::npos) {
        raise(ErrorKind::Format, "text cell '" + s + "' contains a CSV delimiter");
    }
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) raise(ErrorKind::Format, "cannot format value");
    return std::string(buf, ptr);
}

std::string to_csv(const fusion::FeatureTable& table, const std::optional<ArtifactStamp>& stamp) {
    std::string out;
    if (stamp) out += "# " + to_comment(*stamp) + "\n";
    bool first = true;
    for (const char* c : kReservedColumns) {
        out += first ? "" : ",";
        out += c;
        first = false;
    }
    for (const auto& c : table.columns()) {
        check_text_cell(c);
        out += ",";
        out += c;
    }
    out += "\n";
    for (std::size_t i = 0; i < table.rows(); ++i) {
        const auto& m = table.meta(i);
        check_text_cell(m.specimen_id);
        out += m.specimen_id;
        out += ",";
        out += std::to_string(m.layer_index);
        out += ",";
        out += fusion::to_string(m.label);
        out += ",";
        out += fusion::to_string(m.provenance);
        for (double v : table.row(i)) {
            out += ",";
            out += format_double(v);
        }
        out += "\n";
    }
    return out;
}

fusion::FeatureTable from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    std::optional<fusion::FeatureTable> table;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto cells = split_line(line);
        if (!table) {
            std::set<std::string_view> seen;
            for (auto c : cells) {
                if (!seen.insert(c).second) raise(ErrorKind::Format, "duplicate column '" + std::string(c) + "'");
            }
            for (std::size_t k = 0; k < std::size(kReservedColumns); ++k) {
                if (cells.size() <= k || cells[k] != kReservedColumns[k]) {
                    raise(ErrorKind::Format, std::string("expected reserved column '") + kReservedColumns[k] + "'");
                }
            }
            std::vector<std::string> names;
            for (std::size_t k = std::size(kReservedColumns); k < cells.size(); ++k) names.emplace_back(cells[k]);
            table.emplace(std::move(names));
            width = cells.size();
            continue;
        }
        if (cells.size() != width) {
            raise(ErrorKind::Format, "line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                                         " cells, expected " + std::to_string(width));
        }
        fusion::RowMeta meta;
        meta.specimen_id = std::string(cells[0]);
        int layer = 0;
        const auto [p, ec] = std::from_chars(cells[1].data(), cells[1].data() + cells[1].size(), layer);
        if (ec != std::errc() || p != cells[1].data() + cells[1].size()) {
            raise(ErrorKind::Format, "line " + std::to_string(line_no) + ": bad layer_index");
        }
        meta.layer_index = layer;
        meta.label = fusion::parse_condition(cells[2]);
        meta.provenance = fusion::parse_provenance(cells[3]);
        std::vector<double> values;
        values.reserve(width - 4);
        for (std::size_t k = 4; k < cells.size(); ++k) values.push_back(parse_double(cells[k], line_no));
        table->add_row(values, std::move(meta));
    }
    if (!table) raise(ErrorKind::Format, "feature CSV has no header");
    return std::move(*table);
}

void write_feature_table(const std::filesystem::path& path, const fusion::FeatureTable& table,
                         const std::optional<ArtifactStamp>& stamp) {
    atomic_write(path, to_csv(table, stamp));
}

fusion::FeatureTable read_feature_table(const std::filesystem::path& path) {
    try {
        return from_csv(read_file(path));
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Format) raise(ErrorKind::Format, path.string() + ": " + e.what());
        throw;
    }
}

}  // namespace dedmon::io
