#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "splitwire/errors.hpp"
#include "splitwire/io.hpp"
#include "splitwire/pipeline.hpp"
#include "splitwire/synth.hpp"

namespace py = pybind11;
using namespace splitwire;

namespace {

PointCloud cloud_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& points) {
    if (points.ndim() != 2 || points.shape(1) != 3) {
        throw py::value_error("points must have shape (n, 3)");
    }
    PointCloud cloud;
    const auto n = static_cast<std::size_t>(points.shape(0));
    cloud.points.reserve(n);
    const auto view = points.unchecked<2>();
    for (std::size_t i = 0; i < n; ++i) {
        cloud.points.push_back({view(i, 0), view(i, 1), view(i, 2)});
    }
    return cloud;
}

py::array_t<double> array_from_cloud(const PointCloud& cloud) {
    py::array_t<double> out({cloud.size(), std::size_t{3}});
    auto view = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        view(i, 0) = cloud.points[i].x;
        view(i, 1) = cloud.points[i].y;
        view(i, 2) = cloud.points[i].z;
    }
    return out;
}

std::vector<RelativeCoord> coords_from_array(
    const py::array_t<double, py::array::c_style | py::array::forcecast>& coords) {
    if (coords.ndim() != 2 || coords.shape(1) != 2) {
        throw py::value_error("coords must have shape (n, 2)");
    }
    std::vector<RelativeCoord> out;
    const auto n = static_cast<std::size_t>(coords.shape(0));
    out.reserve(n);
    const auto view = coords.unchecked<2>();
    for (std::size_t i = 0; i < n; ++i) out.push_back({view(i, 0), view(i, 1)});
    return out;
}

std::vector<int> labels_from_array(const py::array_t<int, py::array::c_style | py::array::forcecast>& labels) {
    if (labels.ndim() != 1) throw py::value_error("labels must be one-dimensional");
    const auto view = labels.unchecked<1>();
    std::vector<int> out(static_cast<std::size_t>(labels.shape(0)));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = view(i);
    return out;
}

template <typename T>
py::array_t<T> to_array(const std::vector<T>& values) {
    py::array_t<T> out(values.size());
    auto view = out.template mutable_unchecked<1>();
    for (std::size_t i = 0; i < values.size(); ++i) view(i) = values[i];
    return out;
}

py::dict frame_dict(const SpanFrame& frame) {
    py::dict d;
    d["origin"] = py::make_tuple(frame.origin_x, frame.origin_y);
    d["direction"] = py::make_tuple(frame.dir_x, frame.dir_y);
    return d;
}

DpcParams make_params(double d_c, int max_clusters, double gamma_gap_threshold,
                      double noise_density_fraction) {
    DpcParams params;
    params.cutoff = d_c;
    params.max_clusters = max_clusters;
    params.gamma_gap_threshold = gamma_gap_threshold;
    params.noise_density_fraction = noise_density_fraction;
    return params;
}

py::dict cluster_dict(const ClusterResult& result) {
    py::dict d;
    d["k"] = result.k;
    d["labels"] = to_array(result.labels);
    d["centers"] = to_array(std::vector<std::int64_t>(result.centers.begin(), result.centers.end()));
    std::vector<double> rho, delta, gamma;
    for (const auto& p : result.decision) {
        rho.push_back(p.rho);
        delta.push_back(p.delta);
        gamma.push_back(p.gamma);
    }
    d["rho"] = to_array(rho);
    d["delta"] = to_array(delta);
    d["gamma"] = to_array(gamma);
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Split sub-conductor extraction from power-line LiDAR point clouds";

    py::register_exception<Error>(m, "SplitwireError", PyExc_RuntimeError);

    m.def(
        "generate",
        [](int k, const std::string& layout, double spacing, double span_length, double sag,
           int points_per_wire, double noise_sigma, std::uint64_t seed) {
            BundleSpec spec;
            spec.k = k;
            spec.layout = layout_from_string(layout);
            spec.spacing = spacing;
            spec.span_length = span_length;
            spec.sag = sag;
            spec.points_per_wire = points_per_wire;
            spec.noise_sigma = noise_sigma;
            spec.seed = seed;
            const PointCloud cloud = generate(spec);
            return py::make_tuple(array_from_cloud(cloud), to_array(*cloud.labels));
        },
        py::arg("k") = 4, py::arg("layout") = "square", py::arg("spacing") = 0.45,
        py::arg("span_length") = 10.0, py::arg("sag") = 0.5, py::arg("points_per_wire") = 1000,
        py::arg("noise_sigma") = 0.005, py::arg("seed") = 0,
        "Generate a labeled synthetic bundle cloud; returns (points, labels).");

    m.def(
        "extract",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& points,
           double d_c, int max_clusters, double gamma_gap_threshold,
           double noise_density_fraction, double segment_length) {
            PipelineParams params;
            params.dpc = make_params(d_c, max_clusters, gamma_gap_threshold,
                                     noise_density_fraction);
            params.segment_length = segment_length;
            const ExtractResult result = extract_bundle(cloud_from_array(points), params);

            py::dict out;
            out["k"] = result.clusters.k;
            out["labels"] = to_array(result.labels);
            out["frame"] = frame_dict(result.frame);
            out["centerline"] =
                py::make_tuple(result.centerline.a, result.centerline.b, result.centerline.c);
            out["windowed"] = result.windowed;
            out["w_mid"] = result.w_mid;

            py::list wires;
            for (const auto& fit : result.fits) {
                py::dict w;
                w["label"] = fit.label;
                w["size"] = fit.size;
                if (fit.wire.has_value()) {
                    w["profile"] = py::make_tuple(fit.wire->profile.a, fit.wire->profile.b,
                                                  fit.wire->profile.c);
                    w["offset_line"] = py::make_tuple(fit.wire->offset_line.offset,
                                                      fit.wire->offset_line.slope);
                    w["rmse"] = fit.wire->rmse;
                    w["support"] = fit.wire->support;
                } else {
                    w["profile"] = py::none();
                    w["offset_line"] = py::none();
                    w["rmse"] = py::none();
                    w["support"] = py::none();
                }
                wires.append(std::move(w));
            }
            out["wires"] = std::move(wires);

            if (result.geometry.has_value()) {
                const auto& geo = *result.geometry;
                py::list centers;
                for (const auto& c : geo.centers) centers.append(py::make_tuple(c[0], c[1]));
                out["bundle_centers"] = std::move(centers);
                out["min_adjacent_spacing"] =
                    geo.min_adjacent_spacing.has_value()
                        ? py::cast(*geo.min_adjacent_spacing)
                        : py::none().cast<py::object>();
            } else {
                out["bundle_centers"] = py::none();
                out["min_adjacent_spacing"] = py::none();
            }
            return out;
        },
        py::arg("points"), py::arg("d_c") = 0.05, py::arg("max_clusters") = 8,
        py::arg("gamma_gap_threshold") = 3.0, py::arg("noise_density_fraction") = 0.0,
        py::arg("segment_length") = 10.0,
        "Run the full extraction pipeline on (n, 3) world points.");

    m.def(
        "relative_coordinates",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& points) {
            const PointCloud cloud = cloud_from_array(points);
            const SpanFrame frame = fit_span_frame(cloud);
            const auto projected = project(cloud, frame);
            const ParabolaModel model = fit_parabola(projected);
            const auto rel = relative_coords(projected, model);

            py::array_t<double> coords({rel.size(), std::size_t{2}});
            auto view = coords.mutable_unchecked<2>();
            std::vector<double> w(rel.size());
            for (std::size_t i = 0; i < rel.size(); ++i) {
                view(i, 0) = rel[i].d;
                view(i, 1) = rel[i].r;
                w[i] = projected[i].w;
            }
            py::dict out;
            out["coords"] = std::move(coords);
            out["w"] = to_array(w);
            out["frame"] = frame_dict(frame);
            out["centerline"] = py::make_tuple(model.a, model.b, model.c);
            return out;
        },
        py::arg("points"),
        "Span frame, centerline parabola and (d, r) relative coordinates of (n, 3) points.");

    m.def(
        "fit_parabola",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& w,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& z) {
            if (w.ndim() != 1 || z.ndim() != 1) throw py::value_error("w and z must be 1-d");
            std::vector<double> wv(w.data(), w.data() + w.shape(0));
            std::vector<double> zv(z.data(), z.data() + z.shape(0));
            const ParabolaModel model = fit_parabola(wv, zv);
            return py::make_tuple(model.a, model.b, model.c);
        },
        py::arg("w"), py::arg("z"), "Least-squares parabola z = a*w^2 + b*w + c.");

    m.def(
        "local_density",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& coords,
           double d_c) { return to_array(local_density(coords_from_array(coords), d_c)); },
        py::arg("coords"), py::arg("d_c") = 0.05,
        "Gaussian-kernel local density over (n, 2) relative coordinates.");

    m.def(
        "dpc_cluster",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& coords,
           double d_c, int max_clusters, double gamma_gap_threshold,
           double noise_density_fraction) {
            return cluster_dict(cluster(
                coords_from_array(coords),
                make_params(d_c, max_clusters, gamma_gap_threshold, noise_density_fraction)));
        },
        py::arg("coords"), py::arg("d_c") = 0.05, py::arg("max_clusters") = 8,
        py::arg("gamma_gap_threshold") = 3.0, py::arg("noise_density_fraction") = 0.0,
        "Improved DPC clustering over (n, 2) relative coordinates.");

    m.def(
        "dpc_bruteforce",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& coords,
           double d_c, int max_clusters, double gamma_gap_threshold,
           double noise_density_fraction) {
            return cluster_dict(dpc_bruteforce(
                coords_from_array(coords),
                make_params(d_c, max_clusters, gamma_gap_threshold, noise_density_fraction)));
        },
        py::arg("coords"), py::arg("d_c") = 0.05, py::arg("max_clusters") = 8,
        py::arg("gamma_gap_threshold") = 3.0, py::arg("noise_density_fraction") = 0.0,
        "O(n^2) reference DPC implementation (n <= 2000).");

    m.def(
        "label_accuracy",
        [](const py::array_t<int, py::array::c_style | py::array::forcecast>& predicted,
           const py::array_t<int, py::array::c_style | py::array::forcecast>& truth) {
            return label_accuracy(labels_from_array(predicted), labels_from_array(truth));
        },
        py::arg("predicted"), py::arg("truth"),
        "Best-permutation label accuracy in [0, 1].");

    m.def(
        "read_xyz",
        [](const std::string& path, bool has_label_column) {
            const PointCloud cloud = read_xyz_file(path, has_label_column);
            py::object labels = cloud.has_labels()
                                    ? py::object(to_array(*cloud.labels))
                                    : py::object(py::none());
            return py::make_tuple(array_from_cloud(cloud), labels);
        },
        py::arg("path"), py::arg("has_label_column") = false,
        "Read an XYZ/CSV cloud; returns (points, labels-or-None).");

    m.def(
        "read_ply",
        [](const std::string& path) { return array_from_cloud(read_ply_file(path)); },
        py::arg("path"), "Read an ASCII PLY cloud; returns (n, 3) points.");

    m.def(
        "write_xyz",
        [](const std::string& path,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& points,
           const std::optional<py::array_t<int, py::array::c_style | py::array::forcecast>>&
               labels) {
            PointCloud cloud = cloud_from_array(points);
            if (labels.has_value()) {
                cloud.labels = labels_from_array(*labels);
                if (cloud.labels->size() != cloud.size()) {
                    throw py::value_error("labels length must match points");
                }
            }
            write_xyz_file(cloud, path);
        },
        py::arg("path"), py::arg("points"), py::arg("labels") = py::none(),
        "Write an XYZ file, optionally with a label column.");

    m.def(
        "write_labels_csv",
        [](const std::string& path,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& points,
           const py::array_t<int, py::array::c_style | py::array::forcecast>& labels) {
            PointCloud cloud = cloud_from_array(points);
            cloud.labels = labels_from_array(labels);
            if (cloud.labels->size() != cloud.size()) {
                throw py::value_error("labels length must match points");
            }
            write_labels_csv_file(cloud, path);
        },
        py::arg("path"), py::arg("points"), py::arg("labels"),
        "Write the x,y,z,label CSV.");

#ifdef SPLITWIRE_VERSION
    m.attr("__version__") = SPLITWIRE_VERSION;
#else
    m.attr("__version__") = "0.1.0";
#endif
}
