#pragma once

#include <stdexcept>
#include <string>

namespace vfg
{

class Error : public std::runtime_error
{
public:
  Error(std::string const &kind, std::string const &what)
  : std::runtime_error(kind + ": " + what),
    _kind(kind)
  {}

  std::string const &kind() const
  { return _kind; }

private:
  std::string _kind;
};

#define VFG_ERROR(Name) \
  struct Name : public Error \
  { explicit Name(std::string const &what = "") : Error(#Name, what) {} };

VFG_ERROR(CapExceeded)
VFG_ERROR(BadPerm)
VFG_ERROR(BadHom)
VFG_ERROR(MalformedWord)
VFG_ERROR(ValidationError)
VFG_ERROR(BudgetExceeded)
VFG_ERROR(MixedEdgeOrders)
VFG_ERROR(NotNonElementary)
VFG_ERROR(EllipticElement)
VFG_ERROR(NotVirtuallyCyclic)
VFG_ERROR(BadK)
VFG_ERROR(DeltaNotInD)
VFG_ERROR(NotProperExtension)
VFG_ERROR(ElementaryGroup)
VFG_ERROR(IllegalStep)
VFG_ERROR(EdgeMismatch)
VFG_ERROR(ChainNotCertified)
VFG_ERROR(ParseError)

#undef VFG_ERROR

} // namespace vfg
