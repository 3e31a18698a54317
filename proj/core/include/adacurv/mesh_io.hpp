#pragma once

#include "adacurv/mesh.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace adacurv {

enum class MeshFormat { auto_detect, ply_ascii, ply_binary, obj };

[[nodiscard]] MeshFormat parse_mesh_format(const std::string& name);
[[nodiscard]] const char* to_string(MeshFormat format);

// Reads PLY (ascii or binary little-endian) or OBJ. With auto_detect the
// content decides: a "ply" magic line selects PLY, anything else is read as
// OBJ. Vertex properties other than x/y/z, nx/ny/nz, red/green/blue/alpha are
// imported as scalar fields. Faces must be triangles.
[[nodiscard]] Mesh load_mesh(const std::filesystem::path& path,
                             MeshFormat format = MeshFormat::auto_detect);
[[nodiscard]] Mesh read_mesh(std::istream& in, MeshFormat format,
                             const std::string& source_name = "<stream>");

struct SaveOptions {
    MeshFormat format = MeshFormat::auto_detect;  // by extension, PLY binary by default
    // Scalar fields to embed; nullopt embeds all of them.
    std::optional<std::vector<std::string>> fields;
};

// Binary PLY stores positions as double (exact round trip) and fields as
// float; ascii PLY writes every number with 9 significant digits.
void save_mesh(const Mesh& mesh, const std::filesystem::path& path, const SaveOptions& options = {});
void write_mesh(const Mesh& mesh, std::ostream& out, const SaveOptions& options);

}  // namespace adacurv
