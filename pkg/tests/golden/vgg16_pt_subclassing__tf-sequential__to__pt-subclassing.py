# Generated by nnmigrate 0.1.0
# source dialect: tf/sequential -> target: pt/subclassing
# pivot sha256: b660742dc67eedc5

import torch
import torch.nn as nn

INPUT_SHAPE = (32, 32, 3)


class Vgg16(nn.Module):
    def __init__(self):
        super().__init__()
        self.conv1_1 = nn.Conv2d(3, 64, kernel_size=(3, 3), stride=(1, 1), padding=1)
        self.conv1_1_act = nn.ReLU()
        self.conv1_2 = nn.Conv2d(64, 64, kernel_size=(3, 3), stride=(1, 1), padding=1)
        self.conv1_2_act = nn.ReLU()
        self.pool1 = nn.MaxPool2d(kernel_size=(2, 2), stride=(2, 2))
        self.conv2_1 = nn.Conv2d(64, 128, kernel_size=(3, 3), stride=(1, 1), padding=1)
        self.conv2_1_act = nn.ReLU()
        self.conv2_2 = nn.Conv2d(128, 128, kernel_size=(3, 3), stride=(1, 1), padding=1)
        self.conv2_2_act = nn.ReLU()
        self.pool2 = nn.MaxPool2d(kernel_size=(2, 2), stride=(2, 2))
        self.conv3_1 = nn.Conv2d(128, 256, kernel_size=(3, 3), stride=(1, 1), padding=1)
        self.conv3_1_act = nn.ReLU()
        self.conv3_2 = nn.Conv2d(256, 256, kernel_size=(3, 3), stride=(1, 1), padding=1)
        self.conv3_2_act = nn.ReLU()
        self.conv3_3 = nn.Conv2d(256, 256, kernel_size=(3, 3), stride=(1, 1), padding=1)
        self.conv3_3_act = nn.ReLU()
        self.pool3 = nn.MaxPool2d(kernel_size=(2, 2), stride=(2, 2))
        self.conv4_1 = nn.Conv2d(256, 512, kernel_size=(3, 3), stride=(1, 1), padding=1)
        self.conv4_1_act = nn.ReLU()
        self.conv4_2 = nn.Conv2d(512, 512, kernel_size=(3, 3), stride=(1, 1), padding=1)
        self.conv4_2_act = nn.ReLU()
        self.conv4_3 = nn.Conv2d(512, 512, kernel_size=(3, 3), stride=(1, 1), padding=1)
        self.conv4_3_act = nn.ReLU()
        self.pool4 = nn.MaxPool2d(kernel_size=(2, 2), stride=(2, 2))
        self.conv5_1 = nn.Conv2d(512, 512, kernel_size=(3, 3), stride=(1, 1), padding=1)
        self.conv5_1_act = nn.ReLU()
        self.conv5_2 = nn.Conv2d(512, 512, kernel_size=(3, 3), stride=(1, 1), padding=1)
        self.conv5_2_act = nn.ReLU()
        self.conv5_3 = nn.Conv2d(512, 512, kernel_size=(3, 3), stride=(1, 1), padding=1)
        self.conv5_3_act = nn.ReLU()
        self.pool5 = nn.MaxPool2d(kernel_size=(2, 2), stride=(2, 2))
        self.avgpool = nn.AvgPool2d(kernel_size=(1, 1), stride=(1, 1))
        self.flatten = nn.Flatten()
        self.fc1 = nn.Linear(512, 4096)
        self.fc1_act = nn.ReLU()
        self.drop1 = nn.Dropout(0.5)
        self.fc2 = nn.Linear(4096, 4096)
        self.fc2_act = nn.ReLU()
        self.drop2 = nn.Dropout(0.5)
        self.fc3 = nn.Linear(4096, 10)

    def forward(self, x):
        x_conv1_1_pre = x.permute(0, 3, 1, 2)
        x_conv1_1 = self.conv1_1(x_conv1_1_pre)
        x_conv1_1 = self.conv1_1_act(x_conv1_1)
        x_conv1_2 = self.conv1_2(x_conv1_1)
        x_conv1_2 = self.conv1_2_act(x_conv1_2)
        x_pool1 = self.pool1(x_conv1_2)
        x_conv2_1 = self.conv2_1(x_pool1)
        x_conv2_1 = self.conv2_1_act(x_conv2_1)
        x_conv2_2 = self.conv2_2(x_conv2_1)
        x_conv2_2 = self.conv2_2_act(x_conv2_2)
        x_pool2 = self.pool2(x_conv2_2)
        x_conv3_1 = self.conv3_1(x_pool2)
        x_conv3_1 = self.conv3_1_act(x_conv3_1)
        x_conv3_2 = self.conv3_2(x_conv3_1)
        x_conv3_2 = self.conv3_2_act(x_conv3_2)
        x_conv3_3 = self.conv3_3(x_conv3_2)
        x_conv3_3 = self.conv3_3_act(x_conv3_3)
        x_pool3 = self.pool3(x_conv3_3)
        x_conv4_1 = self.conv4_1(x_pool3)
        x_conv4_1 = self.conv4_1_act(x_conv4_1)
        x_conv4_2 = self.conv4_2(x_conv4_1)
        x_conv4_2 = self.conv4_2_act(x_conv4_2)
        x_conv4_3 = self.conv4_3(x_conv4_2)
        x_conv4_3 = self.conv4_3_act(x_conv4_3)
        x_pool4 = self.pool4(x_conv4_3)
        x_conv5_1 = self.conv5_1(x_pool4)
        x_conv5_1 = self.conv5_1_act(x_conv5_1)
        x_conv5_2 = self.conv5_2(x_conv5_1)
        x_conv5_2 = self.conv5_2_act(x_conv5_2)
        x_conv5_3 = self.conv5_3(x_conv5_2)
        x_conv5_3 = self.conv5_3_act(x_conv5_3)
        x_pool5 = self.pool5(x_conv5_3)
        x_avgpool = self.avgpool(x_pool5)
        x_avgpool_post = x_avgpool.permute(0, 2, 3, 1)
        x_flatten = self.flatten(x_avgpool_post)
        x_fc1 = self.fc1(x_flatten)
        x_fc1 = self.fc1_act(x_fc1)
        x_drop1 = self.drop1(x_fc1)
        x_fc2 = self.fc2(x_drop1)
        x_fc2 = self.fc2_act(x_fc2)
        x_drop2 = self.drop2(x_fc2)
        x_fc3 = self.fc3(x_drop2)
        return x_fc3


model = Vgg16()
