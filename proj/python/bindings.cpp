#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "polylab/experiments.hpp"
#include "polylab/floating.hpp"
#include "polylab/io.hpp"
#include "polylab/noneuclid.hpp"
#include "polylab/special.hpp"
#include "polylab/stein.hpp"

namespace py = pybind11;
using namespace polylab;

namespace {

std::pair<double, double> to_pair(Vec2 v) { return {v.x, v.y}; }
Vec2 to_vec(std::pair<double, double> p) { return {p.first, p.second}; }

std::shared_ptr<SmoothBody> make_body(const std::string& id) {
    return std::make_shared<SmoothBody>(SmoothBody::parse(id));
}

}  // namespace

PYBIND11_MODULE(_polylab, m) {
    m.doc() = "Random polytope simulation laboratory (C++ core)";

    py::class_<SmoothBody, std::shared_ptr<SmoothBody>>(m, "Body")
        .def(py::init(&make_body), py::arg("id"))
        .def_property_readonly("id", &SmoothBody::id)
        .def_property_readonly("dimension", &SmoothBody::dimension)
        .def("support", &SmoothBody::support)
        .def("curvature", &SmoothBody::curvature)
        .def("boundary_point", [](const SmoothBody& b, double th) { return to_pair(b.boundary_point(th)); })
        .def("perimeter", &SmoothBody::perimeter)
        .def("area", &SmoothBody::area)
        .def("cap_area", &SmoothBody::cap_area_exact, py::arg("theta_z"), py::arg("t"))
        .def("contains", [](const SmoothBody& b, std::pair<double, double> p) { return b.contains(to_vec(p)); });

    py::class_<WeightFunction>(m, "Weight")
        .def(py::init([](const std::string& id, std::shared_ptr<SmoothBody> K) {
                 return WeightFunction::parse(id, std::move(K));
             }),
             py::arg("id"), py::arg("body"))
        .def_property_readonly("id", &WeightFunction::id)
        .def_property_readonly("normalization", &WeightFunction::normalization)
        .def("density", [](const WeightFunction& w, std::pair<double, double> p) { return w.density(to_vec(p)); })
        .def("sample",
             [](const WeightFunction& w, uint64_t seed, int count) {
                 Rng rng(seed);
                 std::vector<std::pair<double, double>> out;
                 out.reserve(count);
                 for (int i = 0; i < count; ++i) out.push_back(to_pair(w.sample(rng)));
                 return out;
             },
             py::arg("seed"), py::arg("count") = 1)
        .def("weighted_volume", [](const WeightFunction& w, const std::vector<std::pair<double, double>>& poly) {
            std::vector<Vec2> v;
            v.reserve(poly.size());
            for (auto p : poly) v.push_back(to_vec(p));
            return w.weighted_volume(std::span<const Vec2>(v));
        });

    m.def("convex_hull", [](const std::vector<std::pair<double, double>>& pts) {
        std::vector<Vec2> v;
        v.reserve(pts.size());
        for (auto p : pts) v.push_back(to_vec(p));
        const Polytope h = convex_hull2(v);
        std::vector<std::pair<double, double>> ring;
        for (const Vec2& q : h.verts2) ring.push_back(to_pair(q));
        return py::make_tuple(ring, polytope_volume(h), h.degenerate);
    });

    m.def("gnomonic_sphere", [](double x, double y, double z) { return to_pair(gnomonic_sphere(SpherePoint({x, y, z}))); });
    m.def("gnomonic_sphere_inv", [](std::pair<double, double> p) {
        const auto s = gnomonic_sphere_inv(to_vec(p));
        return py::make_tuple(s.v.x, s.v.y, s.v.z);
    });
    m.def("gnomonic_hyper", [](double x, double y, double z) { return to_pair(gnomonic_hyper(HyperboloidPoint({x, y, z}))); });
    m.def("gnomonic_hyper_inv", [](std::pair<double, double> p) {
        const auto h = gnomonic_hyper_inv(to_vec(p));
        return py::make_tuple(h.v.x, h.v.y, h.v.z);
    });

    py::class_<HilbertDomain, std::shared_ptr<HilbertDomain>>(m, "HilbertDomain")
        .def(py::init([](const std::string& id, int grid_m) {
                 return std::make_shared<HilbertDomain>(SmoothBody::parse(id), grid_m);
             }),
             py::arg("id"), py::arg("grid_m") = 1024)
        .def("distance",
             [](const HilbertDomain& C, std::pair<double, double> x, std::pair<double, double> y) {
                 return C.hilbert_distance(to_vec(x), to_vec(y));
             })
        .def("busemann_density", [](const HilbertDomain& C, std::pair<double, double> x) {
            return C.busemann_raw(to_vec(x));
        })
        .def("holmes_thompson_density", [](const HilbertDomain& C, std::pair<double, double> x) {
            return C.holmes_thompson_raw(to_vec(x));
        });

    m.def("ball_volume", &ball_volume);
    m.def("ball_binomial", &ball_binomial);
    m.def("limit_constant_c", &limit_constant_c);
    m.def("limit_constant_c_tilde", &limit_constant_c_tilde);

    m.def("wasserstein1_to_normal", &wasserstein1_to_normal);
    m.def("normality_summary", [](const std::vector<double>& samples) {
        const auto s = normality_summary(samples);
        return py::dict(py::arg("ks") = s.ks, py::arg("skewness") = s.skewness,
                        py::arg("excess_kurtosis") = s.excess_kurtosis, py::arg("w1") = s.w1);
    });

    m.def("wet_part_volume", [](const std::string& body_id, const std::string& weight_id, double delta,
                                int directions) {
        auto K = make_body(body_id);
        FloatingBodySolver solver(K, WeightFunction::parse(weight_id, K), directions);
        return solver.wet_part_volume(delta);
    }, py::arg("body"), py::arg("weight"), py::arg("delta"), py::arg("directions") = 360);

    m.def("fit_rate", [](const std::vector<double>& ns, const std::vector<double>& ys) {
        const auto f = fit_rate(ns, ys);
        return py::make_tuple(f.slope, f.intercept, f.residual);
    });

    m.def("run_experiment",
          [](const std::string& geometry, const std::string& body, const std::vector<int>& n_grid,
             int replications, uint64_t seed, int workers, const std::string& hilbert_domain, int dual_j) {
              ExperimentConfig cfg;
              cfg.geometry = geometry;
              cfg.body = body;
              cfg.n_grid = n_grid;
              cfg.replications = replications;
              cfg.master_seed = seed;
              cfg.workers = workers;
              cfg.hilbert_domain = hilbert_domain;
              cfg.dual_j = dual_j;
              const auto r = run_experiment(cfg);
              py::dict out;
              out["records_csv"] = records_csv(r);
              out["summary_json"] = summary_json(r);
              out["deficit_slope"] = r.summary.deficit.slope;
              out["variance_slope"] = r.summary.variance.slope;
              out["limit_rhs"] = r.summary.limit_rhs;
              out["limit_empirical"] = r.summary.limit_empirical;
              return out;
          },
          py::arg("geometry"), py::arg("body"), py::arg("n_grid"), py::arg("replications"), py::arg("seed"),
          py::arg("workers") = 1, py::arg("hilbert_domain") = "disc:1", py::arg("dual_j") = 1);
}
