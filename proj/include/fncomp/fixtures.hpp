#ifndef FNCOMP_FIXTURES_HPP
#define FNCOMP_FIXTURES_HPP

#include <string>
#include <vector>

#include "fncomp/model.hpp"

namespace fncomp {

// Bundled problem-file documents: ex1, ex2:<p> (default p=0.75), ex3, ex4,
// exinv. Returns the JSON text; load with load_problem.
std::string fixture_document(const std::string& name);
ProblemSpec fixture(const std::string& name);
bool is_fixture_name(const std::string& name);
std::vector<std::string> fixture_names();

} // namespace fncomp

#endif
