// Copyright 2026 The nearone Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>

#include "nearone/construct.hpp"
#include "nearone/contfrac.hpp"
#include "nearone/counting.hpp"
#include "nearone/errors.hpp"
#include "nearone/harmonic.hpp"
#include "nearone/oracle.hpp"

namespace py = pybind11;
using namespace nearone;

namespace {

py::object to_py(const BigInt& v)
{
    const std::string s = v.get_str(10);
    return py::reinterpret_steal<py::object>(PyLong_FromString(s.c_str(), nullptr, 10));
}

BigInt from_py(const py::handle& h)
{
    return BigInt(py::str(py::int_(py::reinterpret_borrow<py::object>(h))).cast<std::string>(), 10);
}

py::object to_py(const Rat& r)
{
    static py::object fraction = py::module_::import("fractions").attr("Fraction");
    return fraction(to_py(r.num()), to_py(r.den()));
}

Rat rat_from_py(const py::handle& h)
{
    py::object f = py::module_::import("fractions").attr("Fraction")(py::reinterpret_borrow<py::object>(h));
    return Rat::reduce(from_py(f.attr("numerator")), from_py(f.attr("denominator")));
}

py::tuple to_py(const Ball& b)
{
    return py::make_tuple(to_py(b.lo().to_rat()), to_py(b.hi().to_rat()));
}

py::object opt_bool(const std::optional<bool>& v)
{
    return v ? py::object(py::bool_(*v)) : py::object(py::none());
}

py::dict pair_dict(const CandidatePair& c)
{
    py::dict d;
    d["k"] = c.k;
    d["d"] = to_py(c.d);
    d["m"] = to_py(c.m);
    d["n"] = to_py(c.n);
    d["y"] = to_py(c.y);
    d["eps"] = to_py(c.eps);
    d["eps_exact"] = c.eps_exact ? to_py(*c.eps_exact) : py::object(py::none());
    d["eps_positive"] = c.eps_positive;
    d["quality"] = to_py(c.quality);
    d["scaled_quality"] = to_py(c.scaled_quality);
    d["bound_ok"] = opt_bool(c.bound_ok);
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Exact and interval tools for harmonic sums close to one";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<IndexError>(m, "IndexError", PyExc_IndexError);
    py::register_exception<UndecidableError>(m, "UndecidableError", PyExc_ArithmeticError);
    py::register_exception<CapacityError>(m, "CapacityError", PyExc_ArithmeticError);
    py::register_exception<CheckpointError>(m, "CheckpointError", PyExc_OSError);

    m.def(
        "convergents",
        [](std::size_t count) {
            const auto cs = e_convergents(count);
            py::list out;
            for (std::size_t i = 0; i < count; ++i) {
                out.append(py::make_tuple(to_py((*cs)[i].p), to_py((*cs)[i].q)));
            }
            return out;
        },
        py::arg("count"), "First convergents of e as (p, q) pairs.");

    m.def(
        "subseq_entry",
        [](std::size_t k, long prec) {
            const SubseqEntry s = subseq_entry(k, prec);
            py::dict d;
            d["k"] = s.k;
            d["p"] = to_py(s.p);
            d["q"] = to_py(s.q);
            d["r"] = to_py(s.r);
            d["sign"] = s.sign;
            return d;
        },
        py::arg("k"), py::arg("prec") = kDefaultPrecision);

    m.def(
        "is_convergent", [](const py::int_& p, const py::int_& q) { return is_convergent(from_py(p), from_py(q)); },
        py::arg("p"), py::arg("q"));

    m.def(
        "hdiff_exact", [](const py::int_& n, const py::int_& mm) { return to_py(hdiff_exact(from_py(n), from_py(mm))); },
        py::arg("n"), py::arg("m"), "Exact sum of 1/l for n <= l <= m.");

    m.def(
        "t_of_n",
        [](const py::int_& n) {
            const EpsilonRecord r = t_of_n(from_py(n));
            py::dict d;
            d["n"] = to_py(r.n);
            d["t"] = to_py(r.t);
            d["eps"] = to_py(r.eps);
            d["scaled"] = to_py(r.scaled);
            return d;
        },
        py::arg("n"));

    m.def("choose_d", [](long k) { return to_py(choose_d(k)); }, py::arg("k"));

    m.def(
        "certify",
        [](long k, const py::object& d, long prec) {
            const BigInt dd = d.is_none() ? choose_d(k) : from_py(d);
            return pair_dict(certify(k, dd, prec, PrecisionPolicy{prec, PrecisionPolicy{}.max_bits}));
        },
        py::arg("k"), py::arg("d") = py::none(), py::arg("prec") = kDefaultPrecision);

    m.def(
        "scan_records",
        [](long n_max, unsigned threads) {
            RecordTable t;
            {
                py::gil_scoped_release release;
                t = scan_records(n_max, {threads, {}, {}});
            }
            py::list out;
            for (const auto& row : t.records) {
                py::dict d;
                d["n"] = to_py(row.rec.n);
                d["t"] = to_py(row.rec.t);
                d["eps"] = to_py(row.rec.eps);
                d["scaled"] = to_py(row.rec.scaled);
                d["reduced"] = py::make_tuple(to_py(row.reduced_p), to_py(row.reduced_q));
                d["is_convergent"] = row.is_convergent;
                out.append(d);
            }
            return out;
        },
        py::arg("n_max"), py::arg("threads") = 1);

    m.def(
        "scan_csv",
        [](long n_max, unsigned threads) {
            std::ostringstream os;
            {
                py::gil_scoped_release release;
                write_csv(os, scan_records(n_max, {threads, {}, {}}));
            }
            return os.str();
        },
        py::arg("n_max"), py::arg("threads") = 1);

    m.def("legendre_threshold", [](long prec) { return to_py(legendre_threshold(prec)); },
          py::arg("prec") = kDefaultPrecision);

    m.def(
        "count_quadratic",
        [](const py::int_& p, const py::int_& q, const py::object& r, const py::object& delta, long N, long a, long b,
           const std::string& method) {
            if (method != "table" && method != "direct") {
                throw DomainError("method must be 'table' or 'direct'");
            }
            const CountReport c = count_quadratic(from_py(p), from_py(q), rat_from_py(r), rat_from_py(delta), N, a, b,
                                                  method == "table" ? CountMethod::table : CountMethod::direct);
            py::dict d;
            d["count"] = c.count;
            d["ties"] = c.ties;
            d["main_term"] = to_py(c.main_term);
            d["error_term"] = to_py(c.error_term);
            return d;
        },
        py::arg("p"), py::arg("q"), py::arg("r"), py::arg("delta"), py::arg("n_max"), py::arg("a") = 0,
        py::arg("b") = 1, py::arg("method") = "table");

    m.def(
        "et_check",
        [](const py::list& points, const py::object& a, const py::object& b, long L) {
            std::vector<Rat> pts;
            for (const auto& h : points) {
                pts.push_back(rat_from_py(h));
            }
            const ETReport r = et_check(PointSet(pts), rat_from_py(a), rat_from_py(b), L);
            py::dict d;
            d["count"] = r.count;
            d["lhs"] = to_py(r.lhs);
            d["rhs"] = to_py(r.rhs);
            d["holds"] = r.holds;
            return d;
        },
        py::arg("points"), py::arg("a"), py::arg("b"), py::arg("L"));

    m.def(
        "approx_pairs",
        [](const py::object& exponent, long n_max, std::pair<long, long> n_mod, std::pair<long, long> m_mod) {
            const AlphaSource alpha = [](long prec) { return Constants::at(prec).alpha; };
            const MOverNSqResult r = search_m_over_nsq(alpha, rat_from_py(exponent), n_max,
                                                       {n_mod.first, n_mod.second}, {m_mod.first, m_mod.second});
            py::list out;
            for (const auto& [mm, n] : r.pairs) {
                out.append(py::make_tuple(to_py(mm), to_py(n)));
            }
            return out;
        },
        py::arg("exponent"), py::arg("n_max"), py::arg("n_mod") = std::pair<long, long>{0, 1},
        py::arg("m_mod") = std::pair<long, long>{0, 1},
        "(m, n) with |3/sinh(1) - m/n^2| < n^-exponent in the given classes.");
}
