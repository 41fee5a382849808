#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "promips/promips.hpp"

namespace py = pybind11;
using namespace promips;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Dataset to_dataset(const Array& a) {
  if (a.ndim() != 2) throw InvalidArgument("expected a 2-d array of points");
  const auto* data = a.data();
  return Dataset(static_cast<std::size_t>(a.shape(1)),
                 std::vector<double>(data, data + a.size()));
}

Vector to_vector(const Array& a) {
  if (a.ndim() != 1) throw InvalidArgument("expected a 1-d query vector");
  return Vector(a.data(), a.data() + a.size());
}

Array to_array(const Dataset& ds) {
  Array out({ds.size(), ds.dim()});
  std::copy(ds.coords().begin(), ds.coords().end(), out.mutable_data());
  return out;
}

py::dict result_dict(const QueryResult& r) {
  std::vector<PointId> ids;
  std::vector<double> ips;
  for (const auto& nb : r.top) {
    ids.push_back(nb.id);
    ips.push_back(nb.ip);
  }
  py::dict d;
  d["ids"] = ids;
  d["ips"] = ips;
  d["pages"] = r.pages;
  d["candidates"] = r.candidates;
  d["termination"] = to_string(r.reason);
  d["probe_radius"] = r.probe_radius;
  d["final_radius"] = r.final_radius;
  return d;
}

}  // namespace

PYBIND11_MODULE(_promips, m) {
  m.doc() = "Probability-guaranteed c-approximate maximum inner product search";

  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);

  m.def("chi2_cdf", &chi2_cdf, py::arg("dof"), py::arg("x"));
  m.def("chi2_inv_cdf", &chi2_inv_cdf, py::arg("dof"), py::arg("p"));
  m.def("optimized_dimension", &optimized_dimension, py::arg("n"));

  m.def(
      "gaussian_mixture",
      [](std::size_t n, std::size_t d, std::size_t clusters, double spread, std::uint64_t seed) {
        MixtureSpec spec;
        spec.n = n;
        spec.d = d;
        spec.clusters = clusters;
        spec.spread = spread;
        spec.seed = seed;
        return to_array(gaussian_mixture(spec));
      },
      py::arg("n") = 10000, py::arg("d") = 100, py::arg("clusters") = 10,
      py::arg("spread") = 0.3, py::arg("seed") = 7);

  m.def(
      "brute_force",
      [](const Array& data, const Array& q, std::size_t k) {
        return result_dict(brute_force_mip(to_dataset(data), to_vector(q), k));
      },
      py::arg("data"), py::arg("q"), py::arg("k") = 10);

  py::class_<IndexConfig>(m, "IndexConfig")
      .def(py::init<>())
      .def_readwrite("k_p", &IndexConfig::k_p)
      .def_readwrite("n_key", &IndexConfig::n_key)
      .def_readwrite("k_sp", &IndexConfig::k_sp)
      .def_readwrite("epsilon", &IndexConfig::epsilon)
      .def_readwrite("page_size", &IndexConfig::page_size)
      .def_readwrite("seed", &IndexConfig::seed)
      .def_readwrite("m", &IndexConfig::m);

  py::class_<IDistanceIndex>(m, "Index")
      .def_property_readonly("n", &IDistanceIndex::size)
      .def_property_readonly("d", &IDistanceIndex::d)
      .def_property_readonly("m", &IDistanceIndex::m)
      .def_property_readonly("epsilon", &IDistanceIndex::epsilon)
      .def(
          "query",
          [](const IDistanceIndex& index, const Array& q, std::size_t k, double c, double p,
             const std::string& variant) {
            const Vector qv = to_vector(q);
            const QueryContext ctx = make_query_context(index, qv, c, p, k);
            QueryResult r;
            {
              py::gil_scoped_release release;
              r = search(index, ctx, parse_variant(variant));
            }
            return result_dict(r);
          },
          py::arg("q"), py::arg("k") = 10, py::arg("c") = 0.9, py::arg("p") = 0.5,
          py::arg("variant") = "ii")
      .def("save", [](const IDistanceIndex& index, const std::string& path) {
        save_index(index, path);
      });

  m.def(
      "build_index",
      [](const Array& data, const IndexConfig& config) {
        const Dataset ds = to_dataset(data);
        py::gil_scoped_release release;
        return build_index(ds, config);
      },
      py::arg("data"), py::arg("config") = IndexConfig{});
  m.def("load_index", &load_index, py::arg("path"));
}
