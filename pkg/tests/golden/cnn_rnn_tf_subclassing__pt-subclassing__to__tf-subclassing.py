# Generated by nnmigrate 0.1.0
# source dialect: pt/subclassing -> target: tf/subclassing
# pivot sha256: 9d02b00dce265c49

import tensorflow as tf
from tensorflow import keras
from tensorflow.keras import layers

INPUT_SHAPE = (20,)


class CnnRnn(keras.Model):
    def __init__(self):
        super().__init__()
        self.embedding = layers.Embedding(10000, 128)
        self.conv1 = layers.Conv1D(64, kernel_size=(3,), strides=(1,), padding='same', activation='relu')
        self.pool1 = layers.MaxPooling1D(pool_size=(2,), strides=(2,))
        self.conv2 = layers.Conv1D(64, kernel_size=(5,), strides=(1,), padding='same', activation='relu')
        self.pool2 = layers.MaxPooling1D(pool_size=(2,), strides=(2,))
        self.conv3 = layers.Conv1D(64, kernel_size=(7,), strides=(1,), padding='same', activation='relu')
        self.pool3 = layers.MaxPooling1D(pool_size=(2,), strides=(2,))
        self.gru = layers.GRU(128)
        self.drop = layers.Dropout(0.5)
        self.fc = layers.Dense(1, activation='sigmoid')

    def call(self, x):
        x_embedding = self.embedding(x)
        x_conv1 = self.conv1(x_embedding)
        x_pool1 = self.pool1(x_conv1)
        x_conv2 = self.conv2(x_embedding)
        x_pool2 = self.pool2(x_conv2)
        x_conv3 = self.conv3(x_embedding)
        x_pool3 = self.pool3(x_conv3)
        x_concatenate = tf.concat([x_pool1, x_pool2, x_pool3], axis=2)
        x_gru = self.gru(x_concatenate)
        x_drop = self.drop(x_gru)
        x_fc = self.fc(x_drop)
        return x_fc


model = CnnRnn()
