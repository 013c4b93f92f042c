#include "nid/tracker.hpp"

namespace nid {

const char* to_string(PathStatus s)
{
    switch (s) {
    case PathStatus::converged: return "converged";
    case PathStatus::at_infinity: return "at_infinity";
    case PathStatus::singular_endpoint: return "singular_endpoint";
    case PathStatus::failed: return "failed";
    }
    return "?";
}

const char* to_string(Regularity r) { return r == Regularity::regular ? "regular" : "singular"; }

const char* to_string(EndpointClass c)
{
    switch (c) {
    case EndpointClass::zero_slack: return "zero_slack";
    case EndpointClass::nonzero_slack: return "nonzero_slack";
    case EndpointClass::at_infinity: return "at_infinity";
    }
    return "?";
}

} // namespace nid
