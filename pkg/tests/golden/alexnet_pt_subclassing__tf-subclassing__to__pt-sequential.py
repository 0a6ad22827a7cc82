# Generated by nnmigrate 0.1.0
# source dialect: tf/subclassing -> target: pt/sequential
# pivot sha256: 3b7a6450792d6c4f

from collections import OrderedDict

import torch
import torch.nn as nn

MODEL_NAME = 'AlexNet'
INPUT_SHAPE = (32, 32, 3)


class Permute(nn.Module):
    def __init__(self, *dims):
        super().__init__()
        self.dims = dims

    def forward(self, x):
        return x.permute(*self.dims)


model = nn.Sequential(OrderedDict([
    ('conv1_pre', Permute(0, 3, 1, 2)),
    ('conv1', nn.Conv2d(3, 64, kernel_size=(5, 5), stride=(1, 1), padding=2)),
    ('conv1_act', nn.ReLU()),
    ('pool1', nn.MaxPool2d(kernel_size=(2, 2), stride=(2, 2))),
    ('conv2', nn.Conv2d(64, 192, kernel_size=(5, 5), stride=(1, 1), padding=2)),
    ('conv2_act', nn.ReLU()),
    ('pool2', nn.MaxPool2d(kernel_size=(2, 2), stride=(2, 2))),
    ('conv3', nn.Conv2d(192, 384, kernel_size=(3, 3), stride=(1, 1), padding=1)),
    ('conv3_act', nn.ReLU()),
    ('conv4', nn.Conv2d(384, 256, kernel_size=(3, 3), stride=(1, 1), padding=1)),
    ('conv4_act', nn.ReLU()),
    ('conv5', nn.Conv2d(256, 256, kernel_size=(3, 3), stride=(1, 1), padding=1)),
    ('conv5_act', nn.ReLU()),
    ('pool3', nn.MaxPool2d(kernel_size=(2, 2), stride=(2, 2))),
    ('avgpool', nn.AvgPool2d(kernel_size=(2, 2), stride=(2, 2))),
    ('avgpool_post', Permute(0, 2, 3, 1)),
    ('flatten', nn.Flatten()),
    ('drop1', nn.Dropout(0.5)),
    ('fc1', nn.Linear(1024, 4096)),
    ('fc1_act', nn.ReLU()),
    ('drop2', nn.Dropout(0.5)),
    ('fc2', nn.Linear(4096, 4096)),
    ('fc2_act', nn.ReLU()),
    ('fc3', nn.Linear(4096, 10)),
]))
