#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"  // vendored

#include "splitwire/errors.hpp"
#include "splitwire/io.hpp"
#include "splitwire/pipeline.hpp"
#include "splitwire/report.hpp"
#include "splitwire/synth.hpp"

namespace {

namespace fs = std::filesystem;
using namespace splitwire;

// Exit codes are the machine contract: 1 parse/validation/parameter,
// 2 degenerate geometry, 3 insufficient data.
int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const DegenerateGeometryError*>(&e)) return 2;
    if (dynamic_cast<const InsufficientDataError*>(&e)) return 3;
    return 1;
}

// XYZ inputs may carry a trailing label column (e.g. files written by
// `synth`); sniff the first data line so both 3- and 4-column files load.
bool has_label_column(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open input file '" + path + "'");
    std::string line;
    while (std::getline(in, line)) {
        std::size_t fields = 0;
        bool in_field = false;
        bool blank = true;
        for (char c : line) {
            const bool sep = c == ',' || std::isspace(static_cast<unsigned char>(c));
            if (!sep) blank = false;
            if (!sep && !in_field) ++fields;
            in_field = !sep;
        }
        if (blank) continue;
        std::size_t first_char = line.find_first_not_of(" \t\r,");
        if (first_char != std::string::npos && line[first_char] == '#') continue;
        return fields >= 4;
    }
    return false;
}

PointCloud read_input(const std::string& path, const std::string& format) {
    if (format == "ply") return read_ply_file(path);
    return read_xyz_file(path, has_label_column(path));
}

struct ExtractOptions {
    std::string input;
    std::string format = "xyz";
    std::string out_dir = ".";
    PipelineParams params;
};

void add_dpc_flags(CLI::App* cmd, PipelineParams& params) {
    cmd->add_option("--d-c", params.dpc.cutoff,
                    "DPC cutoff distance d_c in meters (max sub-conductor diameter)")
        ->capture_default_str();
    cmd->add_option("--max-clusters", params.dpc.max_clusters,
                    "Upper bound on the sub-conductor count")
        ->capture_default_str();
    cmd->add_option("--gamma-gap-threshold", params.dpc.gamma_gap_threshold,
                    "Multiplicative gamma gap selecting the cluster count")
        ->capture_default_str();
    cmd->add_option("--noise-density-fraction", params.dpc.noise_density_fraction,
                    "Relabel points with rho_norm below this fraction as noise (0 = off)")
        ->capture_default_str();
    cmd->add_option("--segment-length", params.segment_length,
                    "Process at most this w-extent (central window), meters")
        ->capture_default_str();
}

int run_extract(const ExtractOptions& opt) {
    PointCloud cloud = read_input(opt.input, opt.format);
    const ExtractResult result = extract_bundle(cloud, opt.params);
    if (result.windowed) {
        std::cerr << "warning: input spans more than " << opt.params.segment_length
                  << " m in w; processing the central window (" << result.window.size()
                  << " of " << cloud.size() << " points)\n";
    }

    fs::create_directories(opt.out_dir);
    const fs::path out_dir(opt.out_dir);

    PointCloud labeled = cloud;
    labeled.labels = result.labels;
    write_labels_csv_file(labeled, (out_dir / "labels.csv").string());

    {
        std::ofstream out(out_dir / "decision.csv");
        if (!out) throw Error("cannot open output file 'decision.csv'");
        write_decision_csv(result.clusters.decision, result.window, out);
    }
    {
        std::ofstream out(out_dir / "report.json");
        if (!out) throw Error("cannot open output file 'report.json'");
        out << make_report(result, opt.params).dump(2) << '\n';
    }

    std::cout << "k = " << result.clusters.k;
    if (result.geometry.has_value() && result.geometry->min_adjacent_spacing.has_value()) {
        std::cout << ", min adjacent spacing = "
                  << sig9(*result.geometry->min_adjacent_spacing) << " m";
    }
    std::cout << "\nwrote " << (out_dir / "labels.csv").string() << ", "
              << (out_dir / "decision.csv").string() << ", "
              << (out_dir / "report.json").string() << '\n';
    return 0;
}

int run_decision_diagram(const ExtractOptions& opt, const std::string& output) {
    PointCloud cloud = read_input(opt.input, opt.format);

    std::ofstream out(output);
    if (!out) throw Error("cannot open output file '" + output + "'");

    if (cloud.size() == 1) {
        // A single point has rho = delta = 0 by definition; no fit is possible
        // or needed.
        std::vector<DecisionPoint> decision(1);
        write_decision_csv(decision, out);
        std::cout << "wrote " << output << '\n';
        return 0;
    }
    if (cloud.size() < 3) {
        throw InsufficientDataError("point count n = " + std::to_string(cloud.size()) +
                                    ", need at least 3 points");
    }

    const SpanFrame frame = fit_span_frame(cloud);
    const std::vector<ProjectedPoint> projected = project(cloud, frame);

    double w_min = projected[0].w, w_max = projected[0].w;
    for (const auto& p : projected) {
        w_min = std::min(w_min, p.w);
        w_max = std::max(w_max, p.w);
    }
    std::vector<std::size_t> window;
    if (w_max - w_min > opt.params.segment_length) {
        const double center = (w_min + w_max) / 2.0;
        for (std::size_t i = 0; i < projected.size(); ++i) {
            if (std::abs(projected[i].w - center) <= opt.params.segment_length / 2.0) {
                window.push_back(i);
            }
        }
        std::cerr << "warning: processing the central window (" << window.size() << " of "
                  << cloud.size() << " points)\n";
        if (window.size() < 3) {
            throw InsufficientDataError("central window keeps " +
                                        std::to_string(window.size()) +
                                        " points, need at least 3");
        }
    } else {
        for (std::size_t i = 0; i < projected.size(); ++i) window.push_back(i);
    }

    std::vector<ProjectedPoint> used;
    for (std::size_t i : window) used.push_back(projected[i]);
    const ParabolaModel centerline = fit_parabola(used);
    const std::vector<RelativeCoord> rel = relative_coords(used, centerline);

    const std::vector<double> rho = local_density(rel, opt.params.dpc.cutoff);
    const Separation sep = separation_delta(rel, rho);
    const std::vector<DecisionPoint> decision = normalize_decision(rho, sep);
    write_decision_csv(decision, window, out);
    std::cout << "wrote " << output << '\n';
    return 0;
}

int run_synth(const BundleSpec& spec, const std::string& layout_name,
              const std::string& output) {
    BundleSpec actual = spec;
    actual.layout = layout_from_string(layout_name);
    actual.validate();

    const PointCloud cloud = generate(actual);
    write_xyz_file(cloud, output);

    std::cout << "generated k=" << actual.k << " layout=" << layout_to_string(actual.layout)
              << " spacing=" << actual.spacing << " span=" << actual.span_length
              << " sag=" << actual.sag << " points_per_wire=" << actual.points_per_wire
              << " sigma=" << actual.noise_sigma << " seed=" << actual.seed << '\n'
              << "wrote " << cloud.size() << " labeled points to " << output << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Split sub-conductor extraction from power-line LiDAR point clouds"};
    app.require_subcommand(1);

    ExtractOptions extract_opt;
    CLI::App* extract = app.add_subcommand(
        "extract", "Run the full pipeline: centerline, DPC clustering, wire fits");
    extract->add_option("--input", extract_opt.input, "Input point cloud file")->required();
    extract->add_option("--format", extract_opt.format, "Input format")
        ->check(CLI::IsMember({"xyz", "ply"}))
        ->capture_default_str();
    extract->add_option("--out-dir", extract_opt.out_dir,
                        "Directory for labels.csv, decision.csv, report.json")
        ->capture_default_str();
    add_dpc_flags(extract, extract_opt.params);

    ExtractOptions diagram_opt;
    std::string diagram_output = "decision.csv";
    CLI::App* diagram = app.add_subcommand(
        "decision-diagram", "Compute normalized decision parameters only");
    diagram->add_option("--input", diagram_opt.input, "Input point cloud file")->required();
    diagram->add_option("--format", diagram_opt.format, "Input format")
        ->check(CLI::IsMember({"xyz", "ply"}))
        ->capture_default_str();
    diagram->add_option("--output", diagram_output, "Decision CSV path")->capture_default_str();
    add_dpc_flags(diagram, diagram_opt.params);

    BundleSpec spec;
    std::string layout_name = "square";
    std::string synth_output;
    CLI::App* synth = app.add_subcommand("synth", "Generate a labeled synthetic bundle cloud");
    synth->add_option("--k", spec.k, "Sub-conductor count (1..8)")->capture_default_str();
    synth->add_option("--layout", layout_name, "single | pair | square | regular_polygon")
        ->capture_default_str();
    synth->add_option("--spacing", spec.spacing, "Adjacent spacing, meters")
        ->capture_default_str();
    synth->add_option("--span-length", spec.span_length, "Span length, meters")
        ->capture_default_str();
    synth->add_option("--sag", spec.sag, "Mid-span sag, meters")->capture_default_str();
    synth->add_option("--points-per-wire", spec.points_per_wire, "Samples per wire")
        ->capture_default_str();
    synth->add_option("--noise-sigma", spec.noise_sigma, "Gaussian noise sigma in (d, r), meters")
        ->capture_default_str();
    synth->add_option("--seed", spec.seed, "RNG seed")->capture_default_str();
    synth->add_option("--output", synth_output, "Output labeled XYZ path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (extract->parsed()) return run_extract(extract_opt);
        if (diagram->parsed()) return run_decision_diagram(diagram_opt, diagram_output);
        if (synth->parsed()) return run_synth(spec, layout_name, synth_output);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
