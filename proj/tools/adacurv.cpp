// adacurv: adaptive curvature fields, density fields and density-guided
// simplification from the command line.

#include "adacurv/ball_volume.hpp"
#include "adacurv/colorize.hpp"
#include "adacurv/curvature.hpp"
#include "adacurv/density.hpp"
#include "adacurv/error.hpp"
#include "adacurv/experiments.hpp"
#include "adacurv/mesh_io.hpp"
#include "adacurv/patch.hpp"
#include "adacurv/shapes.hpp"
#include "adacurv/simplify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace adacurv;

enum ExitCode { kOk = 0, kUsage = 1, kInput = 2, kNumerical = 3 };

bool quiet = false;

void note(const std::string& msg) {
    if (!quiet) std::cerr << "adacurv: " << msg << '\n';
}

Mesh read_input(const std::string& path, const std::string& format) {
    const MeshFormat fmt = parse_mesh_format(format);
    if (path != "-") return load_mesh(path, fmt);
    // stdin is not seekable; buffer it so the format can be sniffed.
    std::ostringstream buffer;
    buffer << std::cin.rdbuf();
    std::istringstream in(buffer.str());
    return read_mesh(in, fmt, "<stdin>");
}

void write_output(const Mesh& mesh, const std::string& path, const std::string& format) {
    SaveOptions options;
    options.format = parse_mesh_format(format);
    if (path == "-") {
        if (options.format == MeshFormat::auto_detect) options.format = MeshFormat::ply_binary;
        write_mesh(mesh, std::cout, options);
        std::cout.flush();
        return;
    }
    save_mesh(mesh, path, options);
}

const ScalarField& require_field(const Mesh& mesh, const std::string& name, const char* hint) {
    auto it = mesh.fields.find(name);
    if (it == mesh.fields.end()) fail(ErrorKind::input, "input mesh has no '" + name + "' field; " + hint);
    return it->second;
}

// "p20" is the 20th percentile of |H|, a plain number an absolute cutoff.
Cutoff parse_cutoff(const std::string& text) {
    try {
        std::size_t used = 0;
        if (!text.empty() && (text[0] == 'p' || text[0] == 'P')) {
            const double p = std::stod(text.substr(1), &used);
            if (used + 1 == text.size()) return Cutoff::at_percentile(p);
        } else {
            const double v = std::stod(text, &used);
            if (used == text.size()) return Cutoff::absolute(v);
        }
    } catch (const std::exception&) {
    }
    fail(ErrorKind::usage, "bad cutoff '" + text + "' (expected a number or pNN)");
}

struct IoArgs {
    std::string input = "-";
    std::string output = "-";
    std::string in_format = "auto";
    std::string out_format = "auto";
};

void add_io(CLI::App* cmd, IoArgs& io, bool with_output = true) {
    cmd->add_option("input", io.input, "Input mesh (PLY or OBJ), - for stdin")->capture_default_str();
    cmd->add_option("--input-format", io.in_format, "auto, ply-ascii, ply-binary or obj")->capture_default_str();
    if (!with_output) return;
    cmd->add_option("-o,--output", io.output, "Output mesh, - for stdout")->capture_default_str();
    cmd->add_option("--format", io.out_format, "Output format: auto (by extension), ply-ascii, ply-binary, obj")
        ->capture_default_str();
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
    std::string kind;
    std::string output = "-";
    std::string format = "auto";
    ShapeSpec spec;
    std::vector<std::string> bumps;
};

void setup_synth(CLI::App& app, SynthArgs& a) {
    auto* cmd = app.add_subcommand("synth", "Generate a synthetic test shape");
    cmd->add_option("kind", a.kind, "plane-grid, icosphere, cylinder, wedge, multiscale-plane, bumpy-plane")
        ->required();
    cmd->add_option("-o,--output", a.output, "Output mesh, - for stdout")->capture_default_str();
    cmd->add_option("--format", a.format, "Output format")->capture_default_str();
    ShapeSpec& s = a.spec;
    cmd->add_option("--radius", s.radius, "Sphere/cylinder radius")->capture_default_str();
    cmd->add_option("--subdivisions", s.subdivisions, "Icosphere midpoint subdivisions")->capture_default_str();
    cmd->add_option("--edge", s.edge, "Grid edge length (fine edge for multiscale-plane)")->capture_default_str();
    cmd->add_option("--nx", s.nx, "Grid cells across")->capture_default_str();
    cmd->add_option("--ny", s.ny, "Grid cells up")->capture_default_str();
    cmd->add_option("--segments", s.segments, "Cylinder segments")->capture_default_str();
    cmd->add_option("--length", s.length, "Cylinder length")->capture_default_str();
    cmd->add_flag("--caps", s.caps, "Close the cylinder ends");
    cmd->add_option("--dihedral", s.dihedral_deg, "Wedge solid angle in degrees (90 convex, 270 concave)")
        ->capture_default_str();
    cmd->add_option("--scale-ratio", s.scale_ratio, "Multiscale coarse/fine edge ratio")->capture_default_str();
    cmd->add_option("--coarse-cells", s.coarse_cells, "Multiscale coarse columns")->capture_default_str();
    cmd->add_option("--transition-growth", s.transition_growth, "Multiscale graded column growth")
        ->capture_default_str();
    cmd->add_option("--bump", a.bumps, "Bumpy-plane bump x,y,height,width (repeatable)");
    cmd->add_option("--noise", s.noise, "Normal noise amplitude, fraction of local edge length")
        ->capture_default_str();
    cmd->add_option("--seed", s.seed, "Noise seed")->capture_default_str();
}

int run_synth(SynthArgs& a) {
    a.spec.kind = parse_shape_kind(a.kind);
    for (const std::string& text : a.bumps) {
        Bump b;
        char sep[3] = {};
        std::istringstream in(text);
        if (!(in >> b.x >> sep[0] >> b.y >> sep[1] >> b.height >> sep[2] >> b.width) ||
            sep[0] != ',' || sep[1] != ',' || sep[2] != ',') {
            fail(ErrorKind::usage, "bad --bump '" + text + "' (expected x,y,height,width)");
        }
        a.spec.bumps.push_back(b);
    }
    if (a.spec.kind == ShapeKind::bumpy_plane && a.spec.bumps.empty()) {
        const double w = a.spec.nx * a.spec.edge, h = a.spec.ny * a.spec.edge;
        a.spec.bumps.push_back({0.5 * w, 0.5 * h, 0.1 * std::min(w, h), 0.05 * std::min(w, h)});
    }
    const Mesh mesh = synth_shape(a.spec);
    note("synth " + a.kind + ": " + std::to_string(mesh.vertex_count()) + " vertices, " +
         std::to_string(mesh.face_count()) + " faces");
    write_output(mesh, a.output, a.format);
    return kOk;
}

// ---------------------------------------------------------------- curvature

struct CurvatureArgs {
    IoArgs io;
    CurvatureOptions options;
    std::string behind_rule = "tangent-plane";
    std::string closure = "spherical-sector";
    std::string profiles;
    bool check_orientation = false;
    std::string patch_path;
    VertexId patch_vertex = 0;
    double patch_radius = 0.0;
};

void setup_curvature(CLI::App& app, CurvatureArgs& a) {
    auto* cmd = app.add_subcommand("curvature", "Compute the adaptive mean-curvature field");
    add_io(cmd, a.io);
    ScaleParams& p = a.options.params;
    cmd->add_option("--threads", a.options.threads, "Worker threads, 0 = all cores")->capture_default_str();
    cmd->add_option("--lambda", p.smoothing_lambda, "Start-scale smoothing factor")->capture_default_str();
    cmd->add_option("--smooth-iterations", p.smoothing_iterations, "Start-scale smoothing iterations")
        ->capture_default_str();
    cmd->add_option("--initial-factor", p.initial_factor, "Multiplier on the start scale")->capture_default_str();
    cmd->add_option("--growth-factor", p.growth_factor, "Radius growth per sample")->capture_default_str();
    cmd->add_option("--radius-steps", p.radius_steps, "Samples minus one")->capture_default_str();
    cmd->add_option("--planar-threshold", p.planar_threshold, "Planar threshold on |normalized curvature|")
        ->capture_default_str();
    cmd->add_option("--edge-smoothing", p.edge_smoothing, "0 = smallest radius, 1 = extremum radius")
        ->capture_default_str();
    cmd->add_option("--fit-tolerance", p.fit_tolerance, "Relative residual bound of the cubic fit")
        ->capture_default_str();
    cmd->add_flag("--planar-signed", p.planar_signed, "Planar test on the signed mean");
    cmd->add_option("--behind-rule", a.behind_rule, "tangent-plane or normal-product")->capture_default_str();
    cmd->add_option("--closure", a.closure, "spherical-sector or planar-facets")->capture_default_str();
    cmd->add_option("--border-depth", a.options.volume.max_border_depth, "Maximum border refinement depth")
        ->capture_default_str();
    cmd->add_option("--sphere-subdivisions", a.options.sphere_subdivisions, "Sphere template subdivisions")
        ->capture_default_str();
    cmd->add_option("--dump-profiles", a.profiles, "Write per-vertex radius profiles as CSV");
    cmd->add_flag("--check-orientation", a.check_orientation, "Report inconsistent face winding");
    cmd->add_option("--dump-patch", a.patch_path, "Write the surface patch of --patch-vertex at --patch-radius");
    cmd->add_option("--patch-vertex", a.patch_vertex, "Center vertex for --dump-patch");
    cmd->add_option("--patch-radius", a.patch_radius, "Radius for --dump-patch");
}

void write_profiles(const CurvatureField& field, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::input, "cannot open '" + path + "' for writing");
    out << "vertex,i,r,H,H_norm,retained\n";
    char line[160];
    for (std::size_t v = 0; v < field.profiles.size(); ++v) {
        const CurvatureProfile& p = field.profiles[v];
        for (std::size_t i = 0; i < p.size(); ++i) {
            const bool kept = i < p.retained.size() && p.retained[i];
            std::snprintf(line, sizeof line, "%zu,%zu,%.17g,%.17g,%.17g,%d\n", v, i, p.radii[i], p.mean[i],
                          p.normalized[i], kept ? 1 : 0);
            out << line;
        }
    }
}

int run_curvature(CurvatureArgs& a) {
    if (a.behind_rule == "tangent-plane") {
        a.options.volume.rule = BehindRule::tangent_plane;
    } else if (a.behind_rule == "normal-product") {
        a.options.volume.rule = BehindRule::normal_product;
    } else {
        fail(ErrorKind::usage, "unknown --behind-rule '" + a.behind_rule + "'");
    }
    if (a.closure == "spherical-sector") {
        a.options.volume.closure = SphereClosure::spherical_sector;
    } else if (a.closure == "planar-facets") {
        a.options.volume.closure = SphereClosure::planar_facets;
    } else {
        fail(ErrorKind::usage, "unknown --closure '" + a.closure + "'");
    }

    Mesh mesh = read_input(a.io.input, a.io.in_format);
    if (a.check_orientation) {
        const OrientationReport report = check_orientation(mesh);
        std::cerr << "orientation: " << report.inconsistent_edges << " inconsistent, " << report.boundary_edges
                  << " boundary, " << report.nonmanifold_edges << " non-manifold edges\n";
        for (const auto& [u, w] : report.inconsistent_examples) std::cerr << "  edge " << u << "-" << w << '\n';
    }
    if (!a.patch_path.empty()) {
        if (a.patch_vertex >= mesh.vertex_count()) fail(ErrorKind::usage, "--patch-vertex out of range");
        const Adjacency adj = build_adjacency(mesh);
        save_mesh(patch_to_mesh(extract_patch(mesh, adj, a.patch_vertex, a.patch_radius)), a.patch_path);
    }

    const CurvatureField field = compute_curvature_field(mesh, a.options);
    if (field.excluded_count() > 0) {
        note(std::to_string(field.excluded_count()) + " vertices excluded and filled from nearest neighbors");
    }
    std::size_t flagged = 0;
    for (const CurvatureProfile& p : field.profiles) flagged += p.orientation_error;
    if (flagged > 0) note(std::to_string(flagged) + " vertices hit a negative volume (orientation error)");
    if (!a.profiles.empty()) write_profiles(field, a.profiles);

    attach_curvature_fields(mesh, field);
    write_output(mesh, a.io.output, a.io.out_format);
    return kOk;
}

// ---------------------------------------------------------------- density

struct DensityArgs {
    IoArgs io;
    std::string field = "curvature";
    std::string min = "p20", max = "p95";
    DensityParams params;
    std::string csv;
};

void setup_density(CLI::App& app, DensityArgs& a) {
    auto* cmd = app.add_subcommand("density", "Map the curvature field to a density field");
    add_io(cmd, a.io);
    cmd->add_option("--field", a.field, "Curvature field to read")->capture_default_str();
    cmd->add_option("--min", a.min, "Lower |H| cutoff: value or pNN percentile")->capture_default_str();
    cmd->add_option("--max", a.max, "Upper |H| cutoff: value or pNN percentile")->capture_default_str();
    cmd->add_option("--d-min", a.params.d_min, "Density below the lower cutoff")->capture_default_str();
    cmd->add_option("--d-max", a.params.d_max, "Density above the upper cutoff")->capture_default_str();
    cmd->add_option("--smooth-iterations", a.params.smooth_iterations, "Density smoothing iterations")
        ->capture_default_str();
    cmd->add_option("--smooth-lambda", a.params.smooth_lambda, "Density smoothing factor")->capture_default_str();
    cmd->add_option("--csv", a.csv, "Also write vertex_index,density CSV");
}

int run_density(DensityArgs& a) {
    a.params.min = parse_cutoff(a.min);
    a.params.max = parse_cutoff(a.max);
    Mesh mesh = read_input(a.io.input, a.io.in_format);
    const ScalarField& h = require_field(mesh, a.field, "run 'adacurv curvature' first");
    ScalarField density = compute_density(mesh, h, a.params);
    if (!a.csv.empty()) write_density_csv(density, a.csv);
    mesh.fields["density"] = std::move(density);
    write_output(mesh, a.io.output, a.io.out_format);
    return kOk;
}

// ---------------------------------------------------------------- simplify

struct SimplifyArgs {
    IoArgs io;
    std::string field = "density";
    std::size_t target = 0;
    double fraction = 0.0;
    bool free_boundary = false;
    double length_weight = 1.0;
};

void setup_simplify(CLI::App& app, SimplifyArgs& a) {
    auto* cmd = app.add_subcommand("simplify", "Density-guided edge-collapse simplification");
    add_io(cmd, a.io);
    auto* target = cmd->add_option("--target", a.target, "Target vertex count");
    auto* fraction = cmd->add_option("--target-fraction", a.fraction, "Target as a fraction of the input count");
    target->excludes(fraction);
    fraction->excludes(target);
    cmd->add_option("--field", a.field, "Density field to read")->capture_default_str();
    cmd->add_flag("--free-boundary", a.free_boundary, "Allow collapses that move the mesh boundary");
    cmd->add_option("--length-weight", a.length_weight, "Weight of the squared edge length in the cost")
        ->capture_default_str();
}

int run_simplify(SimplifyArgs& a, const CLI::App& cmd) {
    const bool by_count = cmd.count("--target") > 0, by_fraction = cmd.count("--target-fraction") > 0;
    if (!by_count && !by_fraction) fail(ErrorKind::usage, "simplify needs --target or --target-fraction");
    Mesh mesh = read_input(a.io.input, a.io.in_format);
    const ScalarField& density = require_field(mesh, a.field, "run 'adacurv density' first");
    SimplifyOptions options;
    if (by_fraction) {
        if (!(a.fraction > 0.0 && a.fraction <= 1.0)) fail(ErrorKind::usage, "--target-fraction must be in (0, 1]");
        options.target_vertices =
            static_cast<std::size_t>(std::ceil(a.fraction * static_cast<double>(mesh.vertex_count())));
    } else {
        options.target_vertices = a.target;
    }
    options.preserve_boundary = !a.free_boundary;
    options.length_weight = a.length_weight;
    SimplifyResult result = simplify(mesh, density, options);
    if (result.stopped_early) {
        note("stopped at " + std::to_string(result.mesh.vertex_count()) + " vertices: no valid collapse left");
    }
    write_output(result.mesh, a.io.output, a.io.out_format);
    return kOk;
}

// ---------------------------------------------------------------- colorize

struct ColorizeArgs {
    IoArgs io;
    std::string field = "curvature";
    std::string colormap = "viridis";
    ColorizeOptions options;
};

void setup_colorize(CLI::App& app, ColorizeArgs& a) {
    auto* cmd = app.add_subcommand("colorize", "Bake a scalar field into vertex colors");
    add_io(cmd, a.io);
    cmd->add_option("--field", a.field, "Field to color by")->capture_default_str();
    cmd->add_option("--colormap", a.colormap, "viridis or diverging")->capture_default_str();
    cmd->add_option("--clamp-low", a.options.clamp_low, "Lower clamp percentile")->capture_default_str();
    cmd->add_option("--clamp-high", a.options.clamp_high, "Upper clamp percentile")->capture_default_str();
    cmd->add_flag("--log", a.options.log_scale, "Log scale (signed log for diverging)");
}

int run_colorize(ColorizeArgs& a) {
    a.options.colormap = parse_colormap(a.colormap);
    Mesh mesh = read_input(a.io.input, a.io.in_format);
    const ScalarField& field = require_field(mesh, a.field, "see --field");
    Colorization c = colorize(field, a.options);
    if (c.degenerate) note("field '" + a.field + "' has an empty clamped range; using a single color");
    mesh.colors = std::move(c.colors);
    write_output(mesh, a.io.output, a.io.out_format);
    return kOk;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
    std::string input;
    std::string in_format = "auto";
    std::string field = "curvature";
    std::string label;
    std::vector<int> criteria;
    unsigned threads = 1;
    std::vector<unsigned> determinism_workers{1, 4, 8};
    std::string csv;
};

void setup_bench(CLI::App& app, BenchArgs& a) {
    auto* cmd = app.add_subcommand(
        "bench", "Report field statistics for an input mesh, or run the acceptance experiments without one");
    cmd->add_option("input", a.input, "Mesh with a curvature field, - for stdin");
    cmd->add_option("--input-format", a.in_format, "Input format")->capture_default_str();
    cmd->add_option("--field", a.field, "Field to summarize")->capture_default_str();
    cmd->add_option("--label", a.label, "Row label (default: sphere if the mesh is a sphere, else mesh)");
    cmd->add_option("--criteria", a.criteria, "Experiments to run (1-11), default all")->delimiter(',');
    cmd->add_option("--threads", a.threads, "Worker threads for the experiments")->capture_default_str();
    cmd->add_option("--determinism-workers", a.determinism_workers, "Worker counts compared by criterion 11")
        ->delimiter(',');
    cmd->add_option("--csv", a.csv, "Also write the report as CSV");
}

bool looks_like_sphere(const Mesh& mesh) {
    if (mesh.vertices.empty()) return false;
    Vec3 c = Vec3::Zero();
    for (const Vec3& v : mesh.vertices) c += v;
    c /= static_cast<double>(mesh.vertex_count());
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const Vec3& v : mesh.vertices) {
        const double d = (v - c).norm();
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    return hi > 0.0 && (hi - lo) <= 1e-3 * hi;
}

int bench_mesh(const BenchArgs& a) {
    const Mesh mesh = read_input(a.input, a.in_format);
    const ScalarField& h = require_field(mesh, a.field, "run 'adacurv curvature' first");
    double mean = 0.0;
    for (double x : h) mean += x;
    mean /= static_cast<double>(h.size());
    double var = 0.0;
    for (double x : h) var += (x - mean) * (x - mean);
    const double sd = std::sqrt(var / static_cast<double>(h.size()));
    const auto [lo, hi] = std::minmax_element(h.begin(), h.end());
    const std::string label = a.label.empty() ? (looks_like_sphere(mesh) ? "sphere" : "mesh") : a.label;
    const char symbol = a.field == "curvature" ? 'H' : '?';
    const std::string name = symbol == 'H' ? "H" : a.field;
    std::printf("%s %s mean=%.2f sd=%.4f min=%.4f max=%.4f n=%zu\n", label.c_str(), name.c_str(), mean, sd, *lo,
                *hi, h.size());
    return kOk;
}

int bench_experiments(const BenchArgs& a) {
    using namespace adacurv::experiments;
    std::vector<int> ids = a.criteria;
    if (ids.empty()) {
        for (int i = 1; i <= 11; ++i) ids.push_back(i);
    }
    for (int id : ids) {
        if (id < 1 || id > 11) fail(ErrorKind::usage, "criteria are numbered 1 to 11");
    }
    const auto experiments = all_experiments();
    std::vector<Outcome> outcomes;
    std::printf("%-3s %-32s %-5s %8s  %s\n", "id", "experiment", "pass", "seconds", "detail");
    auto report = [](const Outcome& o) {
        std::printf("%-3d %-32s %-5s %8.1f  %s\n", o.id, o.name.c_str(), o.pass ? "yes" : "NO", o.seconds,
                    o.detail.c_str());
        std::fflush(stdout);
    };
    for (int id : ids) {
        if (id == 11) continue;
        outcomes.push_back(experiments[static_cast<std::size_t>(id - 1)](a.threads));
        report(outcomes.back());
    }
    if (std::find(ids.begin(), ids.end(), 11) != ids.end()) {
        // Criterion 11 compares against 1-9; run whichever of those were skipped.
        std::vector<Outcome> reference;
        for (int id = 1; id <= 9; ++id) {
            auto it = std::find_if(outcomes.begin(), outcomes.end(), [&](const Outcome& o) { return o.id == id; });
            reference.push_back(it != outcomes.end() ? *it : experiments[static_cast<std::size_t>(id - 1)](a.threads));
        }
        outcomes.push_back(determinism(reference, a.determinism_workers));
        report(outcomes.back());
    }
    if (!a.csv.empty()) {
        std::ofstream out(a.csv);
        if (!out) fail(ErrorKind::input, "cannot open '" + a.csv + "' for writing");
        out << "criterion,name,pass,seconds,detail\n";
        for (const Outcome& o : outcomes) {
            out << o.id << ',' << o.name << ',' << (o.pass ? 1 : 0) << ',' << o.seconds << ",\"" << o.detail
                << "\"\n";
        }
    }
    const bool all_pass = std::all_of(outcomes.begin(), outcomes.end(), [](const Outcome& o) { return o.pass; });
    return all_pass ? kOk : kNumerical;
}

int run_bench(const BenchArgs& a) { return a.input.empty() ? bench_experiments(a) : bench_mesh(a); }

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::usage: return kUsage;
        case ErrorKind::input: return kInput;
        case ErrorKind::numerical: return kNumerical;
    }
    return kNumerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive multi-scale mean curvature, density fields and density-guided simplification",
                 "adacurv"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a key=value file ([subcommand] sections)");
    app.add_flag("-q,--quiet", quiet, "Suppress notes on stderr");

    SynthArgs synth;
    CurvatureArgs curvature;
    DensityArgs density;
    SimplifyArgs simplify_args;
    ColorizeArgs colorize_args;
    BenchArgs bench;
    setup_synth(app, synth);
    setup_curvature(app, curvature);
    setup_density(app, density);
    setup_simplify(app, simplify_args);
    setup_colorize(app, colorize_args);
    setup_bench(app, bench);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::FileError& e) {
        std::cerr << "adacurv: " << e.what() << '\n';
        return kInput;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (app.got_subcommand("synth")) return run_synth(synth);
        if (app.got_subcommand("curvature")) return run_curvature(curvature);
        if (app.got_subcommand("density")) return run_density(density);
        if (app.got_subcommand("simplify")) return run_simplify(simplify_args, *app.get_subcommand("simplify"));
        if (app.got_subcommand("colorize")) return run_colorize(colorize_args);
        if (app.got_subcommand("bench")) return run_bench(bench);
    } catch (const Error& e) {
        std::cerr << "adacurv: error: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::bad_alloc&) {
        std::cerr << "adacurv: error: out of memory\n";
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "adacurv: error: " << e.what() << '\n';
        return kInput;
    }
    return kUsage;
}
