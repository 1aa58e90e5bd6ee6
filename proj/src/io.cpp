#include "splitwire/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "splitwire/errors.hpp"

namespace splitwire {

namespace {

bool is_blank(const std::string& line) {
    for (char c : line) {
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

// Splits on commas or runs of whitespace; empty fields between separators
// are dropped.
std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
            if (!current.empty()) {
                fields.push_back(std::move(current));
                current.clear();
            }
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty()) fields.push_back(std::move(current));
    return fields;
}

double parse_double(const std::string& field, std::size_t line_no) {
    const char* begin = field.c_str();
    char* end = nullptr;
    double value = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
        throw ParseError(line_no, "malformed numeric field '" + field + "'");
    }
    return value;
}

int parse_label(const std::string& field, std::size_t line_no) {
    const char* begin = field.c_str();
    char* end = nullptr;
    long value = std::strtol(begin, &end, 10);
    if (end == begin || *end != '\0') {
        throw ParseError(line_no, "malformed label field '" + field + "'");
    }
    return static_cast<int>(value);
}

std::size_t parse_count(const std::string& field, std::size_t line_no) {
    const char* begin = field.c_str();
    char* end = nullptr;
    long value = std::strtol(begin, &end, 10);
    if (end == begin || *end != '\0' || value < 0) {
        throw ParseError(line_no, "malformed element count '" + field + "'");
    }
    return static_cast<std::size_t>(value);
}

void check_finite(double x, double y, double z, std::size_t line_no) {
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z)) {
        throw ValidationError("line " + std::to_string(line_no) +
                              ": non-finite coordinate");
    }
}

}  // namespace

std::string sig9(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%#.9g", value);
    return buf;
}

PointCloud read_xyz(std::istream& in, bool has_label_column) {
    PointCloud cloud;
    if (has_label_column) cloud.labels.emplace();

    const std::size_t expected = has_label_column ? 4 : 3;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) continue;
        const auto fields = split_fields(line);
        if (fields.empty() || fields[0][0] == '#') continue;
        if (fields.size() != expected) {
            throw ParseError(line_no, "expected " + std::to_string(expected) +
                                          " fields, got " + std::to_string(fields.size()));
        }
        const double x = parse_double(fields[0], line_no);
        const double y = parse_double(fields[1], line_no);
        const double z = parse_double(fields[2], line_no);
        check_finite(x, y, z, line_no);
        cloud.points.push_back({x, y, z});
        if (has_label_column) cloud.labels->push_back(parse_label(fields[3], line_no));
    }
    return cloud;
}

PointCloud read_ply_ascii(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;

    auto next_line = [&](const char* what) -> std::string {
        if (!std::getline(in, line)) {
            throw TruncationError(line_no, std::string("unexpected end of file, expected ") + what);
        }
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
    };

    if (next_line("'ply' magic") != "ply") {
        throw ParseError(line_no, "not a PLY file (missing 'ply' magic)");
    }

    struct Element {
        std::string name;
        std::size_t count = 0;
        std::vector<std::string> properties;
        bool has_list = false;
    };
    std::vector<Element> elements;
    bool format_seen = false;

    for (;;) {
        const std::string header = next_line("PLY header line");
        const auto fields = split_fields(header);
        if (fields.empty()) continue;
        const std::string& keyword = fields[0];
        if (keyword == "comment" || keyword == "obj_info") continue;
        if (keyword == "format") {
            if (fields.size() < 2 || fields[1] != "ascii") {
                throw UnsupportedFormatError(line_no, "only ASCII PLY is supported, got '" +
                                                          (fields.size() > 1 ? fields[1] : "") + "'");
            }
            format_seen = true;
        } else if (keyword == "element") {
            if (fields.size() != 3) throw ParseError(line_no, "malformed element declaration");
            Element e;
            e.name = fields[1];
            e.count = parse_count(fields[2], line_no);
            elements.push_back(std::move(e));
        } else if (keyword == "property") {
            if (elements.empty()) throw ParseError(line_no, "property before any element");
            if (fields.size() >= 2 && fields[1] == "list") {
                elements.back().has_list = true;
            } else if (fields.size() == 3) {
                elements.back().properties.push_back(fields[2]);
            } else {
                throw ParseError(line_no, "malformed property declaration");
            }
        } else if (keyword == "end_header") {
            break;
        } else {
            throw ParseError(line_no, "unknown header keyword '" + keyword + "'");
        }
    }
    if (!format_seen) throw ParseError(line_no, "PLY header has no format line");

    const Element* vertex = nullptr;
    for (const auto& e : elements) {
        if (e.name == "vertex") {
            vertex = &e;
            break;
        }
    }
    if (vertex == nullptr) throw SchemaError(line_no, "PLY has no 'vertex' element");
    if (vertex->has_list) {
        throw SchemaError(line_no, "list properties on element 'vertex' are not supported");
    }

    std::size_t ix = vertex->properties.size(), iy = ix, iz = ix;
    for (std::size_t i = 0; i < vertex->properties.size(); ++i) {
        if (vertex->properties[i] == "x") ix = i;
        if (vertex->properties[i] == "y") iy = i;
        if (vertex->properties[i] == "z") iz = i;
    }
    if (ix == vertex->properties.size() || iy == vertex->properties.size() ||
        iz == vertex->properties.size()) {
        throw SchemaError(line_no, "element 'vertex' is missing an x, y or z property");
    }

    PointCloud cloud;
    cloud.points.reserve(vertex->count);
    for (const auto& e : elements) {
        if (&e == vertex) {
            for (std::size_t i = 0; i < e.count; ++i) {
                const auto fields = split_fields(next_line("vertex data line"));
                if (fields.size() < e.properties.size()) {
                    throw ParseError(line_no, "vertex line has " + std::to_string(fields.size()) +
                                                  " fields, header declares " +
                                                  std::to_string(e.properties.size()));
                }
                const double x = parse_double(fields[ix], line_no);
                const double y = parse_double(fields[iy], line_no);
                const double z = parse_double(fields[iz], line_no);
                check_finite(x, y, z, line_no);
                cloud.points.push_back({x, y, z});
            }
            break;  // trailing elements are ignored
        }
        for (std::size_t i = 0; i < e.count; ++i) next_line("element data line");
    }
    return cloud;
}

void write_xyz(const PointCloud& cloud, std::ostream& out) {
    const bool labeled = cloud.has_labels();
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
        const auto& p = cloud.points[i];
        out << sig9(p.x) << ' ' << sig9(p.y) << ' ' << sig9(p.z);
        if (labeled) out << ' ' << (*cloud.labels)[i];
        out << '\n';
    }
}

void write_labels_csv(const PointCloud& cloud, std::ostream& out) {
    if (!cloud.has_labels()) {
        throw ContractError("write_labels_csv requires a labeled cloud");
    }
    out << "x,y,z,label\n";
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
        const auto& p = cloud.points[i];
        out << sig9(p.x) << ',' << sig9(p.y) << ',' << sig9(p.z) << ','
            << (*cloud.labels)[i] << '\n';
    }
}

namespace {

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open input file '" + path + "'");
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open output file '" + path + "'");
    return out;
}

}  // namespace

PointCloud read_xyz_file(const std::string& path, bool has_label_column) {
    auto in = open_input(path);
    return read_xyz(in, has_label_column);
}

PointCloud read_ply_file(const std::string& path) {
    auto in = open_input(path);
    return read_ply_ascii(in);
}

void write_xyz_file(const PointCloud& cloud, const std::string& path) {
    auto out = open_output(path);
    write_xyz(cloud, out);
}

void write_labels_csv_file(const PointCloud& cloud, const std::string& path) {
    auto out = open_output(path);
    write_labels_csv(cloud, out);
}

}  // namespace splitwire
