"""Adversarial and L1 objectives"""

from typing import NamedTuple

from src.autodiff.functional import bce_loss, l1_loss
from src.autodiff.tensor import Tensor


def discriminator_loss(d_real: Tensor, d_fake: Tensor) -> Tensor:
    """-log D(x, y) - log(1 - D(x, G(x, z))), averaged over the batch"""
    return bce_loss(d_real, True) + bce_loss(d_fake, False)


class GeneratorLoss(NamedTuple):
    total: Tensor
    adversarial: Tensor
    l1: Tensor


def generator_loss_terms(d_fake: Tensor, fake: Tensor, real: Tensor, lambda_l1: float) -> GeneratorLoss:
    """Non-saturating adversarial term -log D(x, G(x, z)) plus lambda * mean|real - fake|"""
    adversarial = bce_loss(d_fake, True)
    l1 = l1_loss(real, fake)
    return GeneratorLoss(total=adversarial + l1 * lambda_l1, adversarial=adversarial, l1=l1)


def generator_loss(d_fake: Tensor, fake: Tensor, real: Tensor, lambda_l1: float) -> Tensor:
    return generator_loss_terms(d_fake, fake, real, lambda_l1).total
