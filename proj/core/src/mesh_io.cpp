#include "adacurv/mesh_io.hpp"

#include "adacurv/error.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

namespace adacurv {

static_assert(std::endian::native == std::endian::little,
              "binary PLY I/O assumes a little-endian host");

MeshFormat parse_mesh_format(const std::string& name) {
    if (name == "auto") return MeshFormat::auto_detect;
    if (name == "ply-ascii" || name == "ascii") return MeshFormat::ply_ascii;
    if (name == "ply" || name == "ply-binary" || name == "binary") return MeshFormat::ply_binary;
    if (name == "obj") return MeshFormat::obj;
    fail(ErrorKind::usage, "unknown mesh format '" + name + "'");
}

const char* to_string(MeshFormat format) {
    switch (format) {
        case MeshFormat::auto_detect: return "auto";
        case MeshFormat::ply_ascii: return "ply-ascii";
        case MeshFormat::ply_binary: return "ply-binary";
        case MeshFormat::obj: return "obj";
    }
    return "?";
}

namespace {

// ---------------------------------------------------------------- PLY types

enum class PlyType { int8, uint8, int16, uint16, int32, uint32, float32, float64 };

bool parse_ply_type(const std::string& s, PlyType& out) {
    static const std::pair<const char*, PlyType> table[] = {
        {"char", PlyType::int8},     {"int8", PlyType::int8},       {"uchar", PlyType::uint8},
        {"uint8", PlyType::uint8},   {"short", PlyType::int16},     {"int16", PlyType::int16},
        {"ushort", PlyType::uint16}, {"uint16", PlyType::uint16},   {"int", PlyType::int32},
        {"int32", PlyType::int32},   {"uint", PlyType::uint32},     {"uint32", PlyType::uint32},
        {"float", PlyType::float32}, {"float32", PlyType::float32}, {"double", PlyType::float64},
        {"float64", PlyType::float64}};
    for (const auto& [name, type] : table) {
        if (s == name) {
            out = type;
            return true;
        }
    }
    return false;
}

struct PlyProperty {
    std::string name;
    PlyType type = PlyType::float32;
    bool is_list = false;
    PlyType count_type = PlyType::uint8;
};

struct PlyElement {
    std::string name;
    std::size_t count = 0;
    std::vector<PlyProperty> properties;
};

struct PlyHeader {
    bool binary = false;
    std::vector<PlyElement> elements;
};

bool is_reserved_vertex_property(const std::string& name) {
    static const char* reserved[] = {"x", "y", "z", "nx", "ny", "nz", "red", "green", "blue", "alpha"};
    return std::any_of(std::begin(reserved), std::end(reserved),
                       [&](const char* r) { return name == r; });
}

PlyHeader read_ply_header(std::istream& in, const std::string& source, std::size_t& line_no) {
    PlyHeader header;
    std::string line;
    line_no = 0;
    auto error = [&](const std::string& msg) {
        fail(ErrorKind::input, source + ":" + std::to_string(line_no) + ": " + msg);
    };

    if (!std::getline(in, line)) error("empty file");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "ply") error("missing 'ply' magic");

    bool have_format = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream tokens(line);
        std::string keyword;
        tokens >> keyword;
        if (keyword.empty() || keyword == "comment" || keyword == "obj_info") continue;
        if (keyword == "end_header") {
            if (!have_format) error("header has no format line");
            return header;
        }
        if (keyword == "format") {
            std::string kind, version;
            tokens >> kind >> version;
            if (kind == "ascii") {
                header.binary = false;
            } else if (kind == "binary_little_endian") {
                header.binary = true;
            } else if (kind == "binary_big_endian") {
                error("binary_big_endian PLY is not supported");
            } else {
                error("unknown PLY format '" + kind + "'");
            }
            have_format = true;
        } else if (keyword == "element") {
            PlyElement element;
            long long count = -1;
            tokens >> element.name >> count;
            if (element.name.empty() || count < 0) error("malformed element line");
            element.count = static_cast<std::size_t>(count);
            header.elements.push_back(std::move(element));
        } else if (keyword == "property") {
            if (header.elements.empty()) error("property before any element");
            PlyProperty prop;
            std::string type;
            tokens >> type;
            if (type == "list") {
                std::string count_type, item_type;
                tokens >> count_type >> item_type >> prop.name;
                prop.is_list = true;
                if (!parse_ply_type(count_type, prop.count_type) || !parse_ply_type(item_type, prop.type)) {
                    error("unknown list property type");
                }
            } else {
                if (!parse_ply_type(type, prop.type)) error("unknown property type '" + type + "'");
                tokens >> prop.name;
            }
            if (prop.name.empty()) error("property without a name");
            header.elements.back().properties.push_back(std::move(prop));
        } else {
            error("unexpected header keyword '" + keyword + "'");
        }
    }
    error("unterminated header (no end_header)");
    return header;
}

// Value source abstracting ascii tokens and little-endian binary records.
class PlyReader {
public:
    PlyReader(std::istream& in, bool binary, std::string source, std::size_t header_lines)
        : in_(in), binary_(binary), source_(std::move(source)), line_(header_lines) {}

    double read(PlyType type) { return binary_ ? read_binary(type) : read_ascii(); }

    [[noreturn]] void error(const std::string& msg) const {
        if (binary_) {
            fail(ErrorKind::input, source_ + ": byte offset " + std::to_string(offset()) + ": " + msg);
        }
        fail(ErrorKind::input, source_ + ":" + std::to_string(line_) + ": " + msg);
    }

private:
    std::size_t offset() const {
        auto pos = in_.tellg();
        return pos < 0 ? 0 : static_cast<std::size_t>(pos);
    }

    template <typename T>
    double raw() {
        T value;
        if (!in_.read(reinterpret_cast<char*>(&value), sizeof(T))) error("unexpected end of binary data");
        return static_cast<double>(value);
    }

    double read_binary(PlyType type) {
        switch (type) {
            case PlyType::int8: return raw<std::int8_t>();
            case PlyType::uint8: return raw<std::uint8_t>();
            case PlyType::int16: return raw<std::int16_t>();
            case PlyType::uint16: return raw<std::uint16_t>();
            case PlyType::int32: return raw<std::int32_t>();
            case PlyType::uint32: return raw<std::uint32_t>();
            case PlyType::float32: return raw<float>();
            case PlyType::float64: return raw<double>();
        }
        return 0.0;
    }

    double read_ascii() {
        while (pos_ >= tokens_.size()) {
            std::string line;
            if (!std::getline(in_, line)) error("unexpected end of file");
            ++line_;
            tokens_.clear();
            pos_ = 0;
            std::istringstream ss(line);
            std::string tok;
            while (ss >> tok) tokens_.push_back(tok);
        }
        const std::string& tok = tokens_[pos_++];
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
        if (ec != std::errc() || ptr != tok.data() + tok.size()) error("malformed number '" + tok + "'");
        return value;
    }

    std::istream& in_;
    bool binary_;
    std::string source_;
    std::size_t line_;
    std::vector<std::string> tokens_;
    std::size_t pos_ = 0;
};

Mesh read_ply(std::istream& in, const std::string& source) {
    std::size_t header_lines = 0;
    const PlyHeader header = read_ply_header(in, source, header_lines);
    PlyReader reader(in, header.binary, source, header_lines);

    Mesh mesh;
    for (const PlyElement& element : header.elements) {
        if (element.name == "vertex") {
            mesh.vertices.assign(element.count, Vec3::Zero());
            bool has_color = false;
            for (const PlyProperty& p : element.properties) {
                if (p.name == "red" || p.name == "green" || p.name == "blue") has_color = true;
                if (!p.is_list && !is_reserved_vertex_property(p.name)) {
                    mesh.fields[p.name].assign(element.count, 0.0);
                }
            }
            if (has_color) mesh.colors.assign(element.count, Rgb{});
            for (std::size_t i = 0; i < element.count; ++i) {
                for (const PlyProperty& p : element.properties) {
                    if (p.is_list) {
                        const auto n = static_cast<long long>(reader.read(p.count_type));
                        for (long long k = 0; k < n; ++k) reader.read(p.type);
                        continue;
                    }
                    const double value = reader.read(p.type);
                    if (p.name == "x") mesh.vertices[i].x() = value;
                    else if (p.name == "y") mesh.vertices[i].y() = value;
                    else if (p.name == "z") mesh.vertices[i].z() = value;
                    else if (p.name == "red") mesh.colors[i].r = static_cast<std::uint8_t>(value);
                    else if (p.name == "green") mesh.colors[i].g = static_cast<std::uint8_t>(value);
                    else if (p.name == "blue") mesh.colors[i].b = static_cast<std::uint8_t>(value);
                    else if (!is_reserved_vertex_property(p.name)) mesh.fields[p.name][i] = value;
                }
            }
        } else if (element.name == "face") {
            mesh.faces.reserve(element.count);
            for (std::size_t i = 0; i < element.count; ++i) {
                bool have_face = false;
                for (const PlyProperty& p : element.properties) {
                    if (!p.is_list) {
                        reader.read(p.type);
                        continue;
                    }
                    const double raw_count = reader.read(p.count_type);
                    if (raw_count < 0) reader.error("negative list length");
                    const auto n = static_cast<std::size_t>(raw_count);
                    const bool indices = p.name == "vertex_indices" || p.name == "vertex_index";
                    if (indices && n != 3) {
                        reader.error("non-triangular face " + std::to_string(i) + " with " +
                                     std::to_string(n) + " vertices");
                    }
                    Face face{};
                    for (std::size_t k = 0; k < n; ++k) {
                        const double v = reader.read(p.type);
                        if (indices) {
                            if (v < 0) reader.error("negative vertex index in face " + std::to_string(i));
                            face[k] = static_cast<VertexId>(v);
                        }
                    }
                    if (indices) {
                        mesh.faces.push_back(face);
                        have_face = true;
                    }
                }
                if (!have_face) reader.error("face element has no vertex_indices list");
            }
        } else {
            for (std::size_t i = 0; i < element.count; ++i) {
                for (const PlyProperty& p : element.properties) {
                    if (p.is_list) {
                        const auto n = static_cast<long long>(reader.read(p.count_type));
                        for (long long k = 0; k < n; ++k) reader.read(p.type);
                    } else {
                        reader.read(p.type);
                    }
                }
            }
        }
    }
    return mesh;
}

// ---------------------------------------------------------------- OBJ

Mesh read_obj(std::istream& in, const std::string& source) {
    Mesh mesh;
    std::string line;
    std::size_t line_no = 0;
    auto error = [&](const std::string& msg) {
        fail(ErrorKind::input, source + ":" + std::to_string(line_no) + ": " + msg);
    };
    auto parse_double = [&](const std::string& tok) {
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
        if (ec != std::errc() || ptr != tok.data() + tok.size()) error("malformed number '" + tok + "'");
        return value;
    };

    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream tokens(line);
        std::string keyword;
        tokens >> keyword;
        if (keyword == "v") {
            std::string x, y, z;
            if (!(tokens >> x >> y >> z)) error("vertex needs three coordinates");
            mesh.vertices.emplace_back(parse_double(x), parse_double(y), parse_double(z));
        } else if (keyword == "f") {
            std::vector<long long> ids;
            std::string tok;
            while (tokens >> tok) {
                const std::string head = tok.substr(0, tok.find('/'));
                long long id = 0;
                auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), id);
                if (ec != std::errc() || ptr != head.data() + head.size() || id == 0) {
                    error("malformed face index '" + tok + "'");
                }
                // OBJ indices are 1-based; negative values count back from the end.
                if (id < 0) id += static_cast<long long>(mesh.vertices.size()) + 1;
                else id -= 1;
                if (id < 0) error("face index out of range");
                ids.push_back(id);
            }
            if (ids.size() < 3) error("face needs at least three vertices");
            if (ids.size() != 3) error("non-triangular face with " + std::to_string(ids.size()) + " vertices");
            mesh.faces.push_back({static_cast<VertexId>(ids[0]), static_cast<VertexId>(ids[1]),
                                  static_cast<VertexId>(ids[2])});
        }
        // vn, vt, groups, materials and comments are ignored.
    }
    return mesh;
}

// ---------------------------------------------------------------- writers

std::vector<std::string> selected_fields(const Mesh& mesh, const SaveOptions& options) {
    std::vector<std::string> names;
    if (!options.fields) {
        for (const auto& [name, values] : mesh.fields) names.push_back(name);
        return names;
    }
    for (const std::string& name : *options.fields) {
        if (!mesh.fields.contains(name)) fail(ErrorKind::usage, "unknown field '" + name + "'");
        if (is_reserved_vertex_property(name)) fail(ErrorKind::usage, "field name '" + name + "' is reserved");
        names.push_back(name);
    }
    return names;
}

template <typename T>
void put(std::ostream& out, T value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

void write_ply(const Mesh& mesh, std::ostream& out, bool binary, const std::vector<std::string>& fields) {
    const char* coord_type = binary ? "double" : "float";
    out << "ply\n"
        << (binary ? "format binary_little_endian 1.0\n" : "format ascii 1.0\n")
        << "comment written by adacurv\n"
        << "element vertex " << mesh.vertex_count() << "\n"
        << "property " << coord_type << " x\nproperty " << coord_type << " y\nproperty " << coord_type
        << " z\n";
    if (mesh.has_colors()) out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
    for (const std::string& name : fields) out << "property float " << name << "\n";
    out << "element face " << mesh.face_count() << "\n"
        << "property list uchar int vertex_indices\n"
        << "end_header\n";

    std::vector<const ScalarField*> columns;
    for (const std::string& name : fields) columns.push_back(&mesh.fields.at(name));

    if (binary) {
        for (std::size_t i = 0; i < mesh.vertex_count(); ++i) {
            const Vec3& p = mesh.vertices[i];
            put(out, p.x());
            put(out, p.y());
            put(out, p.z());
            if (mesh.has_colors()) {
                put(out, mesh.colors[i].r);
                put(out, mesh.colors[i].g);
                put(out, mesh.colors[i].b);
            }
            for (const ScalarField* column : columns) put(out, static_cast<float>((*column)[i]));
        }
        for (const Face& f : mesh.faces) {
            put(out, std::uint8_t{3});
            for (VertexId v : f) put(out, static_cast<std::int32_t>(v));
        }
    } else {
        char buf[64];
        auto num = [&](double v) {
            std::snprintf(buf, sizeof buf, "%.9g", v);
            return buf;
        };
        for (std::size_t i = 0; i < mesh.vertex_count(); ++i) {
            const Vec3& p = mesh.vertices[i];
            out << num(p.x()) << ' ';
            out << num(p.y()) << ' ';
            out << num(p.z());
            if (mesh.has_colors()) {
                out << ' ' << int(mesh.colors[i].r) << ' ' << int(mesh.colors[i].g) << ' '
                    << int(mesh.colors[i].b);
            }
            for (const ScalarField* column : columns) out << ' ' << num((*column)[i]);
            out << '\n';
        }
        for (const Face& f : mesh.faces) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
    }
}

void write_obj(const Mesh& mesh, std::ostream& out) {
    char buf[96];
    for (const Vec3& p : mesh.vertices) {
        std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", p.x(), p.y(), p.z());
        out << buf;
    }
    for (const Face& f : mesh.faces) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
}

MeshFormat format_for_path(const std::filesystem::path& path, MeshFormat requested) {
    if (requested != MeshFormat::auto_detect) return requested;
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".obj" ? MeshFormat::obj : MeshFormat::ply_binary;
}

}  // namespace

Mesh read_mesh(std::istream& in, MeshFormat format, const std::string& source_name) {
    Mesh mesh;
    if (format == MeshFormat::auto_detect) {
        char magic[4] = {};
        in.read(magic, 3);
        const bool is_ply = in.gcount() == 3 && std::memcmp(magic, "ply", 3) == 0;
        in.clear();
        in.seekg(0);
        if (!in) fail(ErrorKind::input, source_name + ": stream is not seekable; pass an explicit format");
        format = is_ply ? MeshFormat::ply_binary : MeshFormat::obj;
    }
    if (format == MeshFormat::obj) {
        mesh = read_obj(in, source_name);
    } else {
        // The header states ascii vs binary; the requested flavour is advisory.
        mesh = read_ply(in, source_name);
    }
    validate(mesh);
    return mesh;
}

Mesh load_mesh(const std::filesystem::path& path, MeshFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::input, "cannot open '" + path.string() + "' for reading");
    return read_mesh(in, format, path.string());
}

void write_mesh(const Mesh& mesh, std::ostream& out, const SaveOptions& options) {
    const auto fields = selected_fields(mesh, options);
    switch (options.format) {
        case MeshFormat::obj: write_obj(mesh, out); break;
        case MeshFormat::ply_ascii: write_ply(mesh, out, false, fields); break;
        case MeshFormat::auto_detect:
        case MeshFormat::ply_binary: write_ply(mesh, out, true, fields); break;
    }
    if (!out) fail(ErrorKind::input, "failed while writing mesh data");
}

void save_mesh(const Mesh& mesh, const std::filesystem::path& path, const SaveOptions& options) {
    SaveOptions resolved = options;
    resolved.format = format_for_path(path, options.format);
    selected_fields(mesh, resolved);  // reject unknown names before touching the file
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::input, "cannot open '" + path.string() + "' for writing");
    write_mesh(mesh, out, resolved);
}

}  // namespace adacurv
