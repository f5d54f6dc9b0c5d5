#include "qpinf/skeleton.hpp"

namespace qpinf {

std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::Pass: return "pass";
        case Outcome::Fail: return "fail";
        case Outcome::Inconclusive: return "inconclusive";
    }
    return "?";
}

}  // namespace qpinf
