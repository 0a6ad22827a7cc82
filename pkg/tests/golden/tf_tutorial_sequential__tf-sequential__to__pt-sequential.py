# Generated by nnmigrate 0.1.0
# source dialect: tf/sequential -> target: pt/sequential
# pivot sha256: b37e7c73ccc689e9

from collections import OrderedDict

import torch
import torch.nn as nn

MODEL_NAME = 'Model'
INPUT_SHAPE = (32, 32, 3)


class Permute(nn.Module):
    def __init__(self, *dims):
        super().__init__()
        self.dims = dims

    def forward(self, x):
        return x.permute(*self.dims)


model = nn.Sequential(OrderedDict([
    ('conv2d_pre', Permute(0, 3, 1, 2)),
    ('conv2d', nn.Conv2d(3, 32, kernel_size=(3, 3), stride=(1, 1))),
    ('conv2d_act', nn.ReLU()),
    ('maxpool2d', nn.MaxPool2d(kernel_size=(2, 2), stride=(2, 2))),
    ('conv2d_1', nn.Conv2d(32, 64, kernel_size=(3, 3), stride=(1, 1))),
    ('conv2d_1_act', nn.ReLU()),
    ('maxpool2d_1', nn.MaxPool2d(kernel_size=(2, 2), stride=(2, 2))),
    ('conv2d_2', nn.Conv2d(64, 64, kernel_size=(3, 3), stride=(1, 1))),
    ('conv2d_2_act', nn.ReLU()),
    ('conv2d_2_post', Permute(0, 2, 3, 1)),
    ('flatten', nn.Flatten()),
    ('linear', nn.Linear(1024, 64)),
    ('linear_act', nn.ReLU()),
    ('linear_1', nn.Linear(64, 10)),
]))
