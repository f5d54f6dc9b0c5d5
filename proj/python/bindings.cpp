#include "qpinf/cli.hpp"
#include "qpinf/codec.hpp"
#include "qpinf/gamma.hpp"
#include "qpinf/presentations.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace qpinf;

namespace {

std::vector<std::string> dump_all(const std::vector<Json>& rs) {
    std::vector<std::string> out;
    for (const auto& r : rs) out.push_back(r.dump());
    return out;
}

std::vector<Json> parse_all(const std::vector<std::string>& rs) {
    std::vector<Json> out;
    for (const auto& r : rs) out.push_back(Json::parse(r));
    return out;
}

}  // namespace

PYBIND11_MODULE(_qpinf, m) {
    m.doc() = "QP^inf skeleta, back-and-forth engine and homogeneity certificates";

    py::register_exception<Error>(m, "QpinfError", PyExc_RuntimeError);

    m.def(
        "run",
        [](const std::string& config) {
            auto out = run(config_from_json(Json::parse(config)));
            return py::make_tuple(dump_all(out.records), out.exit_code);
        },
        py::arg("config"), "Run a JSON RunConfig; returns (records as JSON strings, exit code).");
    m.def(
        "replay",
        [](const std::vector<std::string>& records) {
            auto out = replay(parse_all(records));
            return py::make_tuple(dump_all(out.records), out.exit_code);
        },
        py::arg("records"));

    m.def(
        "normalize", [](const std::string& coords) { return encode(decoded<ProjPoint>(Json::parse(coords))).dump(); },
        py::arg("coords"), "Normal form of a point given as a JSON list of \"num/den\" strings.");
    m.def(
        "level", [](const std::string& point) { return decoded<ProjPoint>(Json::parse(point)).level(); }, py::arg("point"));
    m.def(
        "nbhd_base",
        [](const std::string& point, unsigned k) { return encode(nbhd_base(decoded<ProjPoint>(Json::parse(point)), k)).dump(); },
        py::arg("point"), py::arg("k"));
    m.def(
        "skeleton_tail_level", [](const std::string& open) { return skeleton_tail_level(decoded<BasicOpen>(Json::parse(open))); },
        py::arg("open"));
    m.def(
        "closure_member",
        [](const std::string& point, const std::string& open) {
            return closure_member(decoded<ProjPoint>(Json::parse(point)), decoded<BasicOpen>(Json::parse(open)));
        },
        py::arg("point"), py::arg("open"));
    m.def(
        "gamma",
        [](std::size_t count) {
            std::vector<std::string> out;
            for (const auto& g : gamma_enumerate(count)) out.push_back(to_string(g));
            return out;
        },
        py::arg("count"), "The first `count` elements of the stage order.");
    m.def(
        "golomb_closure_contains",
        [](long a, long b, long t, std::size_t horizon) {
            auto c = golomb_closure_contains({mpz_class(a), mpz_class(b)}, mpz_class(t), horizon);
            return c.contains;
        },
        py::arg("a"), py::arg("b"), py::arg("t"), py::arg("horizon"));
}
