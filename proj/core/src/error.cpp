#include "coarselab/error.hpp"

namespace coarselab {

void fail_precondition(const std::string& what) { throw PreconditionError(what); }

void fail_invariant(const std::string& what) { throw InvariantError(what); }

}  // namespace coarselab
