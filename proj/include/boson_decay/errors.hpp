#pragma once

#include <stdexcept>
#include <string>

namespace boson_decay {

/// Problem size exceeds what a dense oracle can hold.
class ResourceError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// A truncated Fock basis lost more norm than the caller's tolerance.
class TruncationError : public std::runtime_error
{
  public:
    TruncationError(const std::string& what, double defect)
        : std::runtime_error(what), defect_(defect)
    {
    }
    double defect() const noexcept { return defect_; }

  private:
    double defect_;
};

/// A requested asymptotic formula is evaluated outside its domain.
class OutsideAsymptoticRegime : public std::domain_error
{
  public:
    using std::domain_error::domain_error;
};

/// Label propagation needs the bath-to-bath coefficient block.
class CrossBlockRequired : public std::logic_error
{
  public:
    using std::logic_error::logic_error;
};

/// Bad or incomplete scenario configuration.
class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace boson_decay
