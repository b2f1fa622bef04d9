#pragma once

#include "risfd/beamforming.hpp"
#include "risfd/channel.hpp"
#include "risfd/complexity.hpp"
#include "risfd/config.hpp"
#include "risfd/drl.hpp"
#include "risfd/errors.hpp"
#include "risfd/harness.hpp"
#include "risfd/neural.hpp"
#include "risfd/numerics.hpp"
#include "risfd/sysmodel.hpp"
