#include "errors.hpp"

namespace bubblex {

const char* err_name(Err e) {
    switch (e) {
        case Err::Parse: return "ParseError";
        case Err::NotADecomposition: return "NotADecomposition";
        case Err::DegenerateCell: return "DegenerateCell";
        case Err::InconsistentDim: return "InconsistentDim";
        case Err::UnknownSimplex: return "UnknownSimplex";
        case Err::DegreeOverflow: return "DegreeOverflow";
        case Err::MeshMismatch: return "MeshMismatch";
        case Err::DegreeMismatch: return "DegreeMismatch";
        case Err::NotAFace: return "NotAFace";
        case Err::NotDivisible: return "NotDivisible";
        case Err::NotClosed: return "NotClosed";
        case Err::NoSolution: return "NoSolution";
        case Err::Incompatible: return "Incompatible";
        case Err::IndexMismatch: return "IndexMismatch";
        case Err::SingularPoint: return "SingularPoint";
        case Err::Nonconforming: return "Nonconforming";
        case Err::InvalidArgument: return "InvalidArgument";
        case Err::Io: return "IoError";
        case Err::Internal: return "InternalError";
    }
    return "Unknown";
}

}  // namespace bubblex
