#pragma once

#include <cstdint>

namespace ers::stream_role {

// Substream keys used inside one trial. Grid column t uses
// substream(kGrid).substream(t).
inline constexpr std::uint64_t kProposal = 0x70726f70ULL;
inline constexpr std::uint64_t kGrid = 0x67726964ULL;
inline constexpr std::uint64_t kSelection = 0x73656c65ULL;
inline constexpr std::uint64_t kAcceptance = 0x61636370ULL;

}  // namespace ers::stream_role
