// Python bindings: images travel as numpy arrays (H x W, or H x W x 3 for
// color), either uint8 or floats in [0, 1].

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "imgcx/codec.hpp"
#include "imgcx/config.hpp"
#include "imgcx/errors.hpp"
#include "imgcx/geometry.hpp"
#include "imgcx/image_io.hpp"
#include "imgcx/measures.hpp"
#include "imgcx/preprocess.hpp"
#include "imgcx/stats.hpp"

namespace py = pybind11;
using namespace imgcx;

namespace {

GrayImage to_image(const py::array& arr) {
    if (arr.ndim() != 2 && !(arr.ndim() == 3 && arr.shape(2) == 3)) {
        throw InvalidInput("expected an H x W or H x W x 3 array");
    }
    const auto h = static_cast<std::size_t>(arr.shape(0));
    const auto w = static_cast<std::size_t>(arr.shape(1));
    const std::size_t channels = arr.ndim() == 3 ? 3 : 1;
    std::vector<double> data(w * h * channels);
    if (py::isinstance<py::array_t<std::uint8_t>>(arr)) {
        auto a = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>::ensure(arr);
        const auto* p = a.data();
        for (std::size_t i = 0; i < data.size(); ++i) data[i] = p[i] / 255.0;
    } else {
        auto a = py::array_t<double, py::array::c_style | py::array::forcecast>::ensure(arr);
        if (!a) throw InvalidInput("array must be numeric");
        std::copy(a.data(), a.data() + data.size(), data.begin());
    }
    if (channels == 3) return to_grayscale(RgbImage{w, h, std::move(data)});
    return GrayImage(w, h, std::move(data));
}

py::array_t<double> to_array(const GrayImage& img) {
    py::array_t<double> out({img.height(), img.width()});
    std::copy(img.pixels().begin(), img.pixels().end(), out.mutable_data());
    return out;
}

py::array_t<bool> to_array(const BinaryImage& mask) {
    py::array_t<bool> out({mask.height(), mask.width()});
    auto* p = out.mutable_data();
    for (std::size_t i = 0; i < mask.pixels().size(); ++i) p[i] = mask.pixels()[i] != 0;
    return out;
}

MeasureConfig make_config(const py::kwargs& kw) {
    MeasureConfig c;
    for (const auto& [key, value] : kw) {
        const auto k = key.cast<std::string>();
        if (k == "rcg") c.structural.coarse_radius = value.cast<int>();
        else if (k == "delta") c.structural.delta = value.cast<double>();
        else if (k == "eta_lightness") c.structural.darkness = !value.cast<bool>();
        else if (k == "fractal_radius") c.fractal_binarization.radius = value.cast<int>();
        else if (k == "box_offsets") c.box_offset_averaging = value.cast<bool>();
        else if (k == "quality") c.lossy.quality = value.cast<double>();
        else if (k == "fa_peak") c.aesthetic.peak = value.cast<double>();
        else if (k == "fa_sigma") c.aesthetic.sigma = value.cast<double>();
        else if (k == "bins") c.histogram_bins = value.cast<std::size_t>();
        else throw InvalidParameter("unknown option '" + k + "'");
    }
    c.validate();
    return c;
}

py::dict measures_dict(const MeasureVector& mv) {
    py::dict d;
    for (Measure m : kAllMeasures) {
        const auto& v = mv[m];
        d[py::str(std::string(measure_name(m)))] = v ? py::cast(*v) : py::none();
    }
    return d;
}

geometry::LayeredForm to_form(const std::vector<std::vector<std::vector<std::pair<double, double>>>>& layers) {
    geometry::LayeredForm form;
    for (const auto& layer : layers) {
        geometry::Layer l;
        for (const auto& line : layer) {
            geometry::Polyline p;
            for (auto [x, y] : line) p.push_back({x, y});
            l.polylines.push_back(std::move(p));
        }
        form.layers.push_back(std::move(l));
    }
    return form;
}

py::dict physical_dict(const geometry::PhysicalComplexity& pc) {
    py::list layers;
    for (const auto& l : pc.layers) {
        py::dict d;
        d["convexity"] = l.convexity;
        d["angle_qcd"] = l.angle_qcd ? py::cast(*l.angle_qcd) : py::none();
        d["score"] = l.score;
        d["convexity_degenerate"] = l.convexity_degenerate;
        layers.append(d);
    }
    py::dict out;
    out["score"] = pc.score;
    out["layers"] = layers;
    out["layers_missing_qcd"] = pc.layers_missing_qcd;
    return out;
}

py::bytes as_bytes(const std::vector<std::uint8_t>& v) {
    return py::bytes(reinterpret_cast<const char*>(v.data()), v.size());
}

std::vector<std::uint8_t> from_bytes(const py::bytes& b) {
    const std::string s = b;
    return {s.begin(), s.end()};
}

}  // namespace

PYBIND11_MODULE(_imgcx, m) {
    m.doc() = "Image complexity measures";
    m.attr("__version__") = IMGCX_VERSION;
    m.attr("MEASURES") = [] {
        py::list names;
        for (Measure meas : kAllMeasures) names.append(std::string(measure_name(meas)));
        return names;
    }();

    py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
    py::register_exception<InvalidParameter>(m, "InvalidParameter", PyExc_ValueError);
    py::register_exception<UndefinedValue>(m, "UndefinedValue", PyExc_ArithmeticError);
    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);

    m.def("load_image", [](const std::filesystem::path& p) { return to_array(io::load_image(p)); },
          "Decode a PNG or JPEG file to luminance in [0, 1].");

    m.def("measure_all", [](const py::array& img, const py::kwargs& kw) {
        return measures_dict(measure_all(to_image(img), make_config(kw)));
    }, py::arg("image"), "All eleven measures; None where undefined.");
    m.def("measure_details", [](const py::array& img, const py::kwargs& kw) {
        const auto mv = measure_all(to_image(img), make_config(kw));
        py::dict d;
        d["measures"] = measures_dict(mv);
        d["binarization_degenerate"] = mv.binarization_degenerate;
        d["fractal_degenerate"] = mv.fractal_degenerate;
        d["t_hi"] = mv.strong_threshold;
        d["t_lo"] = mv.weak_threshold;
        d["warnings"] = mv.warnings;
        return d;
    }, py::arg("image"));

    m.def("entropy", [](const py::array& a) { return entropy(to_image(a)); });
    m.def("energy", [](const py::array& a) { return energy(to_image(a)); });
    m.def("contours", [](const py::array& a) { return contours(to_image(a)); });
    m.def("euler", [](const py::array& a) { return euler(to_image(a)); });
    m.def("algorithmic_complexity", [](const py::array& a) { return algorithmic_complexity(to_image(a)); });
    m.def("structural_complexity", [](const py::array& a, const py::kwargs& kw) {
        return structural_complexity(to_image(a), make_config(kw).structural);
    });
    m.def("mc_complexity", [](const py::array& a, const py::kwargs& kw) {
        return mc_complexity(to_image(a), make_config(kw).lossy);
    });
    m.def("mc_complexity_edges", [](const py::array& a, const py::kwargs& kw) {
        return mc_complexity_edges(to_image(a), make_config(kw).lossy);
    });
    m.def("fractal_dimension", [](const py::array& a, const py::kwargs& kw) {
        const auto c = make_config(kw);
        return fractal_dimension(to_image(a), c.fractal_binarization, c.box_offset_averaging).dimension;
    });
    m.def("fractal_aesthetic", [](double d, double peak, double sigma) {
        return fractal_aesthetic(d, FractalAestheticParams{peak, sigma});
    }, py::arg("dimension"), py::arg("peak") = 1.35, py::arg("sigma") = 0.2);
    m.def("skew", [](const py::array& a) { return skew(to_image(a)); });

    m.def("morphological_binarize", [](const py::array& a) {
        const auto r = morphological_binarize(to_image(a));
        return py::make_tuple(to_array(r.mask), r.strong_threshold, r.weak_threshold);
    }, "Returns (mask, t_hi, t_lo).");
    m.def("adaptive_binarize", [](const py::array& a, int radius) {
        return to_array(adaptive_binarize(to_image(a), AdaptiveBinarizationParams{radius}));
    }, py::arg("image"), py::arg("radius") = 2);
    m.def("sobel_edges", [](const py::array& a) { return to_array(sobel_edges(to_image(a))); });
    m.def("coarse_grain", [](const py::array& a, const py::kwargs& kw) {
        return to_array(coarse_grain(to_image(a), make_config(kw).structural).to_gray());
    }, "Three-level image: 1 white, 0.5 grey, 0 black.");

    m.def("lzw_compress", [](const py::bytes& b) { return as_bytes(codec::lzw_compress(from_bytes(b))); });
    m.def("lzw_decompress", [](const py::bytes& b) { return as_bytes(codec::lzw_decompress(from_bytes(b))); });
    m.def("lossy_roundtrip", [](const py::array& a, double quality) {
        const auto img = to_image(a);
        const auto r = codec::lossy_encode(img, codec::LossyCodecParams{quality});
        return py::make_tuple(r.encoded_size, to_array(r.reconstruction), codec::rms_error(img, r.reconstruction));
    }, py::arg("image"), py::arg("quality") = 0.75, "Returns (encoded_size, reconstruction, rms).");

    m.def("pearson", [](const std::vector<double>& x, const std::vector<double>& y) { return stats::pearson(x, y); });
    m.def("p_value", &stats::p_value, py::arg("r"), py::arg("n"));
    m.def("correlation_matrix", [](const std::vector<std::string>& names, const std::vector<stats::Column>& cols) {
        const auto cm = stats::correlation_matrix(names, cols);
        const std::size_t k = cm.size();
        std::vector<std::vector<std::optional<double>>> r(k), p(k);
        std::vector<std::vector<std::size_t>> n(k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) {
                r[i].push_back(cm.r_at(i, j));
                p[i].push_back(cm.p_at(i, j));
                n[i].push_back(cm.n_at(i, j));
            }
        py::dict d;
        d["names"] = names;
        d["r"] = r;
        d["p"] = p;
        d["n"] = n;
        return d;
    }, py::arg("names"), py::arg("columns"), "Pairwise-complete Pearson matrix; None marks missing data.");

    m.def("physical_complexity", [](const std::vector<std::vector<std::vector<std::pair<double, double>>>>& layers) {
        return physical_dict(geometry::physical_complexity(to_form(layers)));
    }, py::arg("layers"), "layers -> polylines -> (x, y) vertices.");
    m.def("physical_complexity_file", [](const std::filesystem::path& p) {
        return physical_dict(geometry::physical_complexity(geometry::load_layered_form(p)));
    });
}
