# 標度實驗
