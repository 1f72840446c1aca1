#include "lwave/config.hpp"
#include "lwave/error.hpp"
#include "lwave/gradcheck_suite.hpp"
#include "lwave/metrics.hpp"
#include "lwave/models.hpp"
#include "lwave/pnm.hpp"
#include "lwave/train.hpp"
#include "lwave/waveblock.hpp"
#include "lwave/wavelet.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <optional>

namespace py = pybind11;
using namespace lwave;

namespace {

using F64Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Matrix to_matrix(const F64Array& a) {
    if (a.ndim() != 2) throw InvalidShape("expected a 2-D array");
    const auto r = static_cast<std::size_t>(a.shape(0));
    const auto c = static_cast<std::size_t>(a.shape(1));
    return Matrix(r, c, std::vector<double>(a.data(), a.data() + r * c));
}

py::array_t<double> from_matrix(const Matrix& m) {
    py::array_t<double> out({m.rows(), m.cols()});
    std::copy(m.data().begin(), m.data().end(), out.mutable_data());
    return out;
}

Tensor4 to_tensor(const F64Array& a) {
    if (a.ndim() != 4) throw InvalidShape("expected an (N, C, H, W) array");
    const Shape4 s{static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)),
                   static_cast<std::size_t>(a.shape(2)), static_cast<std::size_t>(a.shape(3))};
    return Tensor4(s, std::vector<double>(a.data(), a.data() + s.numel()));
}

py::array_t<double> from_tensor(const Tensor4& t) {
    const Shape4 s = t.shape();
    py::array_t<double> out({s.n, s.c, s.h, s.w});
    std::copy(t.data().begin(), t.data().end(), out.mutable_data());
    return out;
}

wavelet::FilterPair filters(const std::string& name) {
    return wavelet::filters_for(wavelet::parse_family(name));
}

py::bytes to_bytes(const std::vector<std::uint8_t>& v) {
    return py::bytes(reinterpret_cast<const char*>(v.data()), v.size());
}

std::vector<std::uint8_t> from_bytes(const py::bytes& b) {
    const std::string s = b;
    return {s.begin(), s.end()};
}

py::dict variant_dict(const VariantResult& v) {
    std::vector<double> losses;
    for (const auto& r : v.result.history.records) losses.push_back(r.generator_loss);
    py::dict d;
    d["losses"] = losses;
    d["epochs_to_threshold"] = v.result.history.epochs_to_threshold;
    d["parameters"] = v.parameter_count;
    d["psnr_db"] = v.final_metrics.psnr_db;
    d["ssim"] = v.final_metrics.ssim;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Wavelet transforms, L-WaveBlock and the convergence harness";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ShapeError>(m, "ShapeError", base.ptr());
    py::register_exception<InvalidConfig>(m, "InvalidConfig", base.ptr());
    py::register_exception<FormatError>(m, "FormatError", base.ptr());
    py::register_exception<NonFiniteLoss>(m, "NonFiniteLoss", base.ptr());

    m.def("filters", [](const std::string& w) {
        const auto f = filters(w);
        return py::make_tuple(std::vector<double>(f.low().begin(), f.low().end()),
                              std::vector<double>(f.high().begin(), f.high().end()));
    }, py::arg("wavelet") = "db2", "(low, high) analysis filters");

    m.def("dwt2d", [](const F64Array& img, const std::string& w) {
        const auto s = wavelet::dwt2d(to_matrix(img), filters(w));
        return py::make_tuple(from_matrix(s.ll), from_matrix(s.lh), from_matrix(s.hl),
                              from_matrix(s.hh));
    }, py::arg("image"), py::arg("wavelet") = "db2",
       "One periodic 2-D level; returns (ll, lh, hl, hh)");

    m.def("idwt2d", [](const F64Array& ll, const F64Array& lh, const F64Array& hl,
                       const F64Array& hh, const std::string& w) {
        const wavelet::SubbandSet s{to_matrix(ll), to_matrix(lh), to_matrix(hl), to_matrix(hh)};
        return from_matrix(wavelet::idwt2d(s, filters(w)));
    }, py::arg("ll"), py::arg("lh"), py::arg("hl"), py::arg("hh"), py::arg("wavelet") = "db2");

    m.def("wavedec2", [](const F64Array& img, const std::string& w, int levels) {
        const auto d = wavelet::wavedec2(to_matrix(img), filters(w), levels);
        py::list details;
        for (const auto& t : d.levels) {
            details.append(py::make_tuple(from_matrix(t.lh), from_matrix(t.hl), from_matrix(t.hh)));
        }
        return py::make_tuple(from_matrix(d.final_ll), details);
    }, py::arg("image"), py::arg("wavelet") = "db2", py::arg("levels") = 1,
       "Returns (final_ll, [(lh, hl, hh) finest first])");

    m.def("waverec2", [](const F64Array& ll, const py::list& details, const std::string& w) {
        wavelet::MultiLevelDecomposition d;
        d.final_ll = to_matrix(ll);
        for (const auto& item : details) {
            const auto t = item.cast<py::tuple>();
            d.levels.push_back({to_matrix(t[0].cast<F64Array>()), to_matrix(t[1].cast<F64Array>()),
                                to_matrix(t[2].cast<F64Array>())});
        }
        return from_matrix(wavelet::waverec2(d, filters(w)));
    }, py::arg("final_ll"), py::arg("details"), py::arg("wavelet") = "db2");

    m.def("psnr", [](const F64Array& a, const F64Array& b, double max_val) {
        return metrics::psnr(to_matrix(a), to_matrix(b), max_val);
    }, py::arg("a"), py::arg("b"), py::arg("max_val") = 1.0);
    m.def("ssim", [](const F64Array& a, const F64Array& b, double max_val) {
        return metrics::ssim(to_matrix(a), to_matrix(b), max_val);
    }, py::arg("a"), py::arg("b"), py::arg("max_val") = 1.0);

    m.def("read_pnm", [](const py::bytes& data) {
        const auto img = pnm::read_pnm(from_bytes(data));
        std::vector<py::ssize_t> shape{static_cast<py::ssize_t>(img.height),
                                       static_cast<py::ssize_t>(img.width)};
        if (img.channels == 3) shape.push_back(3);
        py::array_t<std::uint8_t> out(shape);
        std::copy(img.samples.begin(), img.samples.end(), out.mutable_data());
        return out;
    }, py::arg("data"), "Decode P5/P6 bytes to an (H, W) or (H, W, 3) uint8 array");
    m.def("write_pnm", [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& a) {
        if (a.ndim() != 2 && !(a.ndim() == 3 && a.shape(2) == 3)) {
            throw InvalidShape("expected (H, W) or (H, W, 3)");
        }
        pnm::ImageU8 img;
        img.height = static_cast<std::size_t>(a.shape(0));
        img.width = static_cast<std::size_t>(a.shape(1));
        img.channels = a.ndim() == 3 ? 3 : 1;
        img.samples.assign(a.data(), a.data() + a.size());
        return to_bytes(pnm::write_pnm(img));
    }, py::arg("image"));

    py::class_<LWaveBlockParams>(m, "LWaveBlock")
        .def(py::init([](int in_channels, int path_channels, const std::string& w, double slope,
                         std::uint64_t seed) {
                 return lwaveblock_init({in_channels, path_channels, wavelet::parse_family(w), slope},
                                        seed);
             }),
             py::arg("in_channels") = 1, py::arg("path_channels") = 8, py::arg("wavelet") = "db2",
             py::arg("slope") = 0.2, py::arg("seed") = 0)
        .def("forward", [](const LWaveBlockParams& p, const F64Array& x) {
            return from_tensor(lwaveblock_forward(p, to_tensor(x)));
        }, py::arg("x"), "(N, C, H, W) -> (N, 5 * path_channels, H, W)")
        .def_property_readonly("parameter_count", &LWaveBlockParams::parameter_count)
        .def("serialize", [](const LWaveBlockParams& p) { return to_bytes(serialize(p)); })
        .def_static("deserialize", [](const py::bytes& b) {
            return deserialize_lwaveblock(from_bytes(b));
        });

    py::class_<Generator>(m, "Generator")
        .def(py::init([](int depth, int base_channels, bool use_waveblock,
                         std::vector<int> waveblock_channels, const std::string& w,
                         std::uint64_t seed) {
                 GeneratorConfig c;
                 c.depth = depth;
                 c.base_channels = base_channels;
                 c.use_waveblock = use_waveblock;
                 c.waveblock_channels = std::move(waveblock_channels);
                 c.wavelet = wavelet::parse_family(w);
                 c.seed = seed;
                 return Generator(c);
             }),
             py::arg("depth") = 3, py::arg("base_channels") = 16, py::arg("use_waveblock") = false,
             py::arg("waveblock_channels") = std::vector<int>{8}, py::arg("wavelet") = "db2",
             py::arg("seed") = 0)
        .def("forward", [](const Generator& g, const F64Array& x) {
            return from_tensor(g.forward(to_tensor(x)));
        }, py::arg("x"))
        .def_property_readonly("parameter_count", &Generator::parameter_count)
        .def("serialize", [](const Generator& g) { return to_bytes(g.serialize()); })
        .def_static("deserialize", [](const py::bytes& b) {
            return Generator::deserialize(from_bytes(b));
        });

    m.def("gradcheck", [](std::uint64_t seed) {
        py::list out;
        for (const auto& item : ag::run_gradcheck_suite(seed)) {
            out.append(py::make_tuple(item.name, item.result.max_rel_error, item.passed()));
        }
        return out;
    }, py::arg("seed") = 0, "[(item, max_rel_error, passed)]");

    m.def("compare_convergence", [](const std::vector<std::string>& overrides) {
        RunConfig cfg;
        apply_overrides(cfg, overrides);
        cfg.validate();
        const Dataset data = cfg.make_dataset();
        std::optional<ComparisonReport> report;
        {
            py::gil_scoped_release release;
            report.emplace(compare_convergence(cfg.generator_config(), cfg.train_config(), data));
        }
        py::dict d;
        d["threshold"] = report->threshold;
        d["baseline"] = variant_dict(report->baseline);
        d["waveblock"] = variant_dict(report->waveblock);
        d["report"] = report->to_text();
        return d;
    }, py::arg("overrides") = std::vector<std::string>{},
       "Run both variants with config overrides such as ['epochs=5']");
}
