#pragma once

#include "seamweld/blend.hpp"
#include "seamweld/colordiff.hpp"
#include "seamweld/energy.hpp"
#include "seamweld/image.hpp"
#include "seamweld/io.hpp"
#include "seamweld/mincut.hpp"
#include "seamweld/pipeline.hpp"
#include "seamweld/region.hpp"
#include "seamweld/saliency.hpp"
#include "seamweld/warp.hpp"
