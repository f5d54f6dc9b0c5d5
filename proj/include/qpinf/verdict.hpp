#pragma once

#include <variant>

namespace qpinf {

template <class P>
struct Witnessed {
    P witness;
};

template <class O>
struct Separated {
    O separator;
    unsigned k;
};

struct Undecided {};

template <class P, class O>
using Verdict = std::variant<Witnessed<P>, Separated<O>, Undecided>;

template <class P, class O>
bool is_in(const Verdict<P, O>& v) { return std::holds_alternative<Witnessed<P>>(v); }

template <class P, class O>
bool is_out(const Verdict<P, O>& v) { return std::holds_alternative<Separated<O>>(v); }

}  // namespace qpinf
