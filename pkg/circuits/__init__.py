# 階梯線路模擬與等價構造
