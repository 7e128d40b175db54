#include "tensor.hpp"

#include <sstream>

namespace mpdcnn {

std::string shape_str(const Shape& s) {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < s.size(); ++i) {
        if (i) os << ", ";
        os << s[i];
    }
    os << "]";
    return os.str();
}

const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::argument: return "argument";
        case ErrorKind::data: return "data";
        case ErrorKind::io: return "io";
        case ErrorKind::format: return "format";
        case ErrorKind::numeric: return "numeric";
        case ErrorKind::internal: return "internal";
    }
    return "unknown";
}

}  // namespace mpdcnn
