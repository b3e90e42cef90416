# 糾纏度量
