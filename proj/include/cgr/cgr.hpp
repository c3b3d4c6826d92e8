#ifndef CGR_CGR_HPP
#define CGR_CGR_HPP

#include "cgr/affine_ifs.hpp"
#include "cgr/chaos_game.hpp"
#include "cgr/error.hpp"
#include "cgr/mds_embed.hpp"
#include "cgr/orbit.hpp"
#include "cgr/raster_image.hpp"
#include "cgr/sequence_sources.hpp"
#include "cgr/similarity.hpp"
#include "cgr/source_spec.hpp"
#include "cgr/splitmix64.hpp"

#endif  // CGR_CGR_HPP
