// Pattern P5 (inline-func-varOutside): an anonymous function captures a
// channel from the enclosing scope.
// Expected: no deadlock
package main

import "fmt"

func main() {
	count := make(chan int)
	go func() {
		count <- 10
	}()
	total := <-count
	fmt.Println(total)
}
