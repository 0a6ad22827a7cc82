# Generated by nnmigrate 0.1.0
# source dialect: tf/subclassing -> target: pt/subclassing
# pivot sha256: c75078bf636c416f

import torch
import torch.nn as nn

INPUT_SHAPE = (32, 32, 3)


class Model(nn.Module):
    def __init__(self):
        super().__init__()
        self.conv2d = nn.Conv2d(3, 32, kernel_size=(3, 3), stride=(1, 1))
        self.conv2d_act = nn.ReLU()
        self.maxpool2d = nn.MaxPool2d(kernel_size=(2, 2), stride=(2, 2))
        self.conv2d_1 = nn.Conv2d(32, 64, kernel_size=(3, 3), stride=(1, 1))
        self.conv2d_1_act = nn.ReLU()
        self.maxpool2d_1 = nn.MaxPool2d(kernel_size=(2, 2), stride=(2, 2))
        self.conv2d_2 = nn.Conv2d(64, 64, kernel_size=(3, 3), stride=(1, 1))
        self.conv2d_2_act = nn.ReLU()
        self.flatten = nn.Flatten()
        self.linear = nn.Linear(1024, 64)
        self.linear_act = nn.ReLU()
        self.linear_1 = nn.Linear(64, 10)

    def forward(self, x):
        x_conv2d_pre = x.permute(0, 3, 1, 2)
        x_conv2d = self.conv2d(x_conv2d_pre)
        x_conv2d = self.conv2d_act(x_conv2d)
        x_maxpool2d = self.maxpool2d(x_conv2d)
        x_conv2d_1 = self.conv2d_1(x_maxpool2d)
        x_conv2d_1 = self.conv2d_1_act(x_conv2d_1)
        x_maxpool2d_1 = self.maxpool2d_1(x_conv2d_1)
        x_conv2d_2 = self.conv2d_2(x_maxpool2d_1)
        x_conv2d_2 = self.conv2d_2_act(x_conv2d_2)
        x_conv2d_2_post = x_conv2d_2.permute(0, 2, 3, 1)
        x_flatten = self.flatten(x_conv2d_2_post)
        x_linear = self.linear(x_flatten)
        x_linear = self.linear_act(x_linear)
        x_linear_1 = self.linear_1(x_linear)
        return x_linear_1


model = Model()
