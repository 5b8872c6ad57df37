#ifndef SEEDFOLIO_CORE_VERSION_HPP
#define SEEDFOLIO_CORE_VERSION_HPP

namespace seedfolio {

inline constexpr const char* kVersion = "0.1.0";

} // namespace seedfolio

#endif
