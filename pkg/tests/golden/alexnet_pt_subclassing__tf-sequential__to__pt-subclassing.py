# Generated by nnmigrate 0.1.0
# source dialect: tf/sequential -> target: pt/subclassing
# pivot sha256: 3b7a6450792d6c4f

import torch
import torch.nn as nn

INPUT_SHAPE = (32, 32, 3)


class AlexNet(nn.Module):
    def __init__(self):
        super().__init__()
        self.conv1 = nn.Conv2d(3, 64, kernel_size=(5, 5), stride=(1, 1), padding=2)
        self.conv1_act = nn.ReLU()
        self.pool1 = nn.MaxPool2d(kernel_size=(2, 2), stride=(2, 2))
        self.conv2 = nn.Conv2d(64, 192, kernel_size=(5, 5), stride=(1, 1), padding=2)
        self.conv2_act = nn.ReLU()
        self.pool2 = nn.MaxPool2d(kernel_size=(2, 2), stride=(2, 2))
        self.conv3 = nn.Conv2d(192, 384, kernel_size=(3, 3), stride=(1, 1), padding=1)
        self.conv3_act = nn.ReLU()
        self.conv4 = nn.Conv2d(384, 256, kernel_size=(3, 3), stride=(1, 1), padding=1)
        self.conv4_act = nn.ReLU()
        self.conv5 = nn.Conv2d(256, 256, kernel_size=(3, 3), stride=(1, 1), padding=1)
        self.conv5_act = nn.ReLU()
        self.pool3 = nn.MaxPool2d(kernel_size=(2, 2), stride=(2, 2))
        self.avgpool = nn.AvgPool2d(kernel_size=(2, 2), stride=(2, 2))
        self.flatten = nn.Flatten()
        self.drop1 = nn.Dropout(0.5)
        self.fc1 = nn.Linear(1024, 4096)
        self.fc1_act = nn.ReLU()
        self.drop2 = nn.Dropout(0.5)
        self.fc2 = nn.Linear(4096, 4096)
        self.fc2_act = nn.ReLU()
        self.fc3 = nn.Linear(4096, 10)

    def forward(self, x):
        x_conv1_pre = x.permute(0, 3, 1, 2)
        x_conv1 = self.conv1(x_conv1_pre)
        x_conv1 = self.conv1_act(x_conv1)
        x_pool1 = self.pool1(x_conv1)
        x_conv2 = self.conv2(x_pool1)
        x_conv2 = self.conv2_act(x_conv2)
        x_pool2 = self.pool2(x_conv2)
        x_conv3 = self.conv3(x_pool2)
        x_conv3 = self.conv3_act(x_conv3)
        x_conv4 = self.conv4(x_conv3)
        x_conv4 = self.conv4_act(x_conv4)
        x_conv5 = self.conv5(x_conv4)
        x_conv5 = self.conv5_act(x_conv5)
        x_pool3 = self.pool3(x_conv5)
        x_avgpool = self.avgpool(x_pool3)
        x_avgpool_post = x_avgpool.permute(0, 2, 3, 1)
        x_flatten = self.flatten(x_avgpool_post)
        x_drop1 = self.drop1(x_flatten)
        x_fc1 = self.fc1(x_drop1)
        x_fc1 = self.fc1_act(x_fc1)
        x_drop2 = self.drop2(x_fc1)
        x_fc2 = self.fc2(x_drop2)
        x_fc2 = self.fc2_act(x_fc2)
        x_fc3 = self.fc3(x_fc2)
        return x_fc3


model = AlexNet()
